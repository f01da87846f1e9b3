"""Spacelike separation: the second qubit cannot see the first detector.

The loaded configuration places two compact profiles four widths apart
at equal times.  Whatever the first detector's coupling, gap, or
prepared state, the second qubit's channel coefficients are bitwise
stable and its excitation probability equals (1 - nu_B)/2.
"""

import dataclasses
from pathlib import Path

from twoatom.config import load_config
from twoatom.harness import run_point

CONFIG = Path(__file__).parent / "configs" / "spacelike.cfg"


def main() -> None:
    cfg = load_config(str(CONFIG))
    print(f"geometry: d = 1.0, dt = 0.0, support radii 0.25 + 0.25\n")
    header = f"{'lambda_A':>9} {'gap_A':>6} {'init_A':>8} | " \
             f"{'a':>18} {'b':>18} {'p_exc':>18}"
    print(header)
    print("-" * len(header))
    for coupling in (0.0, 0.5, 1.0):
        for gap in (0.5, 2.0):
            for init in ("ground", "plus"):
                a_spec = dataclasses.replace(
                    cfg.detector_a, coupling=coupling, gap=gap, init=init
                )
                point = run_point(dataclasses.replace(cfg, detector_a=a_spec))
                print(
                    f"{coupling:>9.2f} {gap:>6.2f} {init:>8} | "
                    f"{point.channel.a:>18.15f} {point.channel.b:>18.15f} "
                    f"{point.p_exc:>18.15f}"
                )
    point = run_point(cfg)
    print(f"\ncommutator form E_AB       : {point.e_ab}")
    print(f"(1 - nu_B)/2               : {0.5 * (1 - point.nu_b):.15f}")
    print(f"causal relation            : {point.causal_flag}")


if __name__ == "__main__":
    main()
