#!/usr/bin/env python3
"""Print the classical Apery-like numbers A_n, B_n and the residual of the
identity (-1)^n J_n(n+1, 0) = A_n zeta(2) - B_n.
"""

import argparse

from rabi_zeta.apery import apery_classic, beukers_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args()

    exact = apery_classic(args.n_max)
    print(f"{'n':>3} {'A_n':>16} {'B_n':>28} {'identity residual':>18}")
    for n in range(args.n_max + 1):
        res = beukers_residual(n) if n <= 12 else float("nan")
        print(f"{n:3d} {exact.a_list[n]:16d} {str(exact.b_list[n]):>28} {res:18.3e}")


if __name__ == "__main__":
    main()
