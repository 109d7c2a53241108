#!/usr/bin/env python3
"""Sweep the back-and-forth game over pairs of linear orders.

Prints, for each k, the matrix of LIN(m) ~ LIN(n) verdicts.  The classic
pattern emerges: orders are equivalent at k rounds iff they are equal or both
have at least 2^k - 1 elements.
"""

import argparse

from gamecomonads import zoo
from gamecomonads.equiv import ef_back_and_forth


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--max-k", type=int, default=3)
    args = ap.parse_args()

    for k in range(1, args.max_k + 1):
        print(f"\nk = {k}   (threshold 2^k - 1 = {2 ** k - 1})")
        header = "     " + " ".join(f"{n:2d}" for n in range(1, args.max_n + 1))
        print(header)
        for m in range(1, args.max_n + 1):
            row = [f"{m:3d}: "]
            for n in range(1, args.max_n + 1):
                eq = ef_back_and_forth(zoo.lin(m), zoo.lin(n), k,
                                       build_certificate=False)[0]
                row.append(" =" if eq else " .")
            print("".join(row))


if __name__ == "__main__":
    main()
