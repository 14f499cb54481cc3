#!/usr/bin/env python3
"""Regenerate tests/data/inc_beta_reference.txt with mpmath at 50 digits.

The frozen file is the accuracy oracle for the continued-fraction
implementation of the regularized incomplete beta function, so the test
suite never depends on mpmath itself. Run from the repository root:

    python3 scripts/make_beta_reference.py
"""

from pathlib import Path

import mpmath

GRID_AB = [0.5, 1.0, 2.0, 8.0, 50.0]
OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "inc_beta_reference.txt"


def main() -> None:
    mpmath.mp.dps = 50
    lines = ["# a b x I_x(a,b)  (mpmath betainc regularized, 50 dps, 25 printed digits)"]
    for a in GRID_AB:
        for b in GRID_AB:
            for i in range(1, 100):
                x = i / 100.0
                value = mpmath.betainc(a, b, 0, x, regularized=True)
                lines.append(
                    f"{a:g} {b:g} {x:.2f} {mpmath.nstr(value, 25, strip_zeros=False)}"
                )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines) - 1} reference values to {OUT}")


if __name__ == "__main__":
    main()
