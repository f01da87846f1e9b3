"""Sweep the second kick across the null cone and watch E_AB switch on.

Both profiles are compactly supported with radius 0.25 at distance
d = 1.0, so the commutator form is identically zero while
|dt| < d - 0.5, ramps through the contact window, and peaks near the
cone dt = d.  The exact zeros are bitwise, not merely small.
"""

from pathlib import Path

from twoatom.config import load_config
from twoatom.harness import run_sweep

CONFIG = Path(__file__).parent / "configs" / "lightcone_sweep.cfg"
BAR_WIDTH = 48


def main() -> None:
    cfg = load_config(str(CONFIG))
    rows = run_sweep(cfg)
    peak = max(abs(row["E_AB"]) for row in rows)
    print(f"sweep: dt in [0.3, 1.7], d = 1.0, peak |E_AB| = {peak:.6f}\n")
    print(f"{'dt':>6}  {'relation':>9}  {'|E_AB|':>12}  profile")
    for row in rows:
        mag = abs(row["E_AB"])
        bar = "#" * round(BAR_WIDTH * mag / peak)
        zero = "  (exact 0)" if row["E_AB"] == 0.0 else ""
        print(f"{row['dt']:>6.2f}  {row['causal_flag']:>9}  "
              f"{mag:>12.3e}  {bar}{zero}")
    on_cone = max(rows, key=lambda row: abs(row["E_AB"]))
    print(f"\nlargest response at dt = {on_cone['dt']:.2f} "
          "(cone at dt = d = 1.0)")


if __name__ == "__main__":
    main()
