"""Products of smeared trig factors collapse to four Weyl terms.

The kick unitaries are built from cos Y and sin Y of smeared field
operators.  Because [Y_1, Y_2] is a number, a product of two trig
factors is again a combination of four generalized cosines/sines whose
mixing phase is set by that number.  This demo reduces a product both
ways: by the product-to-sum rule, and by expanding every factor into
Weyl generators and multiplying those out.
"""

import numpy as np

from twoatom.weyl import (
    COS,
    SIN,
    CombinedSmearing,
    reduce_product,
    trig_to_weyl,
)


class PairCommutator:
    """Two labels, one commutator number e = -i [Y_0, Y_1]."""

    def __init__(self, e01: float):
        self.e01 = float(e01)

    def causal_form(self, h1, h2):
        total = 0.0
        for i, m in h1.items():
            for j, n in h2.items():
                if i != j:
                    total += m * n * (self.e01 if (i, j) == (0, 1) else -self.e01)
        return total


def label(arg) -> str:
    if arg.is_zero:
        return "V(0)"
    bits = [f"{m:+d}.f{i}" for i, m in sorted(arg.items())]
    return "V(" + " ".join(bits) + ")"


def describe(combination) -> str:
    parts = []
    for arg, coeff in sorted(combination.terms, key=lambda t: label(t[0])):
        parts.append(f"  ({coeff:+.6f})  {label(arg)}")
    return "\n".join(parts)


def main() -> None:
    f0, f1 = CombinedSmearing.of(0), CombinedSmearing.of(1)
    for e in (0.3, 0.0):
        data = PairCommutator(e)
        reduced = reduce_product(SIN, f0, COS, f1, data)
        expanded = trig_to_weyl([(SIN, f0), (COS, f1)], data)
        print(f"commutator e = {e}")
        print("sin(Y_0) cos(Y_1) reduces to:")
        print(describe(reduced))
        print(f"delta against letterwise expansion: "
              f"{reduced.max_abs_delta(expanded):.1e}")
        print()

    # the mixing phase on the sum argument is exactly exp(-i e / 2)
    e = np.pi / 3
    reduced = reduce_product(COS, f0, COS, f1, PairCommutator(e))
    coeff = reduced.coefficient(f0 + f1)
    print(f"cos cos coefficient on V(f0 + f1) at e = pi/3: {4 * coeff:.6f} / 4")
    print(f"expected twist exp(-i e/2)                   : "
          f"{np.exp(-0.5j * e):.6f}")


if __name__ == "__main__":
    main()
