#!/usr/bin/env python3
"""Regenerate src/gpseq/_norm_constants.py.

The table holds worst-case constants for passing between the binomial-basis
and monomial-basis smoothness norms, and for the arithmetic-progression
restriction inequality.  Each constant is the maximum absolute column sum of
the exact rational transition matrix involved (maximised over the nonconstant
columns), which bounds the inequality uniformly in N >= 1:

  C1(d): d! * binomial->monomial   (entries d!/i! * s(i,j), signed Stirling)
  C2(d): d! * monomial->binomial   (entries d! * S2(j,i) * i!)
  C_AP(d): coefficient transport of p(a*n+b), entries binom(i,j)

Run from the repository root:  python tools/gen_norm_constants.py
"""

from fractions import Fraction
from math import comb, factorial
from pathlib import Path

MAX_DEGREE = 8


def falling_factorial_coeffs(i: int) -> list:
    """Monomial coefficients of n(n-1)...(n-i+1), i.e. signed Stirling row."""
    poly = [1]
    for t in range(i):
        # multiply by (n - t)
        shifted = [0] + poly
        poly = [a - t * b for a, b in zip(shifted, poly + [0])]
    return poly


def stirling2(j: int, i: int) -> int:
    if i == 0:
        return 1 if j == 0 else 0
    if i > j:
        return 0
    total = 0
    for t in range(i + 1):
        total += (-1) ** t * comb(i, t) * (i - t) ** j
    return total // factorial(i)


def c1(d: int) -> int:
    best = 0
    for j in range(1, d + 1):
        col = 0
        for i in range(j, d + 1):
            s = falling_factorial_coeffs(i)[j]
            entry = Fraction(factorial(d), factorial(i)) * s
            assert entry.denominator == 1
            col += abs(int(entry))
        best = max(best, col)
    return best


def c2(d: int) -> int:
    best = 0
    for i in range(1, d + 1):
        col = 0
        for j in range(i, d + 1):
            col += factorial(d) * stirling2(j, i) * factorial(i)
        best = max(best, col)
    return best


def c_ap(d: int) -> int:
    return max(sum(comb(i, j) for i in range(j, d + 1)) for j in range(1, d + 1))


def build_table() -> dict:
    return {d: (c1(d), c2(d), c_ap(d)) for d in range(1, MAX_DEGREE + 1)}


def main():
    table = build_table()
    lines = [
        '"""Norm-equivalence constants.  Generated by tools/gen_norm_constants.py; do not edit."""',
        "",
        "# degree -> (C1, C2, C_AP)",
        "NORM_CONSTANTS = {",
    ]
    for d, (a, b, c) in table.items():
        lines.append(f"    {d}: ({a}, {b}, {c}),")
    lines.append("}")
    lines.append("")
    out = Path(__file__).resolve().parent.parent / "src" / "gpseq" / "_norm_constants.py"
    out.write_text("\n".join(lines))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
