#!/usr/bin/env python3
"""Print a three-route agreement table for the trace terms R_1 and R_2.

For each family and grid point the integral, operator, and (m = 1) series
routes are evaluated and their pairwise deviations reported.
"""

import argparse

from rabi_zeta.operator_oracle import r_m_operator
from rabi_zeta.trace_terms import FLAT, MINUS, PLUS, Nu, r_1_series, r_m_integral

FAMILIES = {
    "flat": FLAT,
    "plus": PLUS,
    "minus": MINUS,
    "nu=1/2": Nu(0.5),
    "nu=3/2": Nu(1.5),
}


def operator_value(name, lam, g, eps, m, trunc_n):
    if name == "flat":
        return r_m_operator("fock", g, lam, eps, m, N=trunc_n).value
    lo = r_m_operator("bergman", g, lam, eps, m, N=trunc_n, nu=0.5).value
    hi = r_m_operator("bergman", g, lam, eps, m, N=trunc_n, nu=1.5).value
    if name == "plus":
        return lo + hi
    if name == "minus":
        return lo - hi
    return lo if name == "nu=1/2" else hi


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=float, nargs="+", default=[1.0, 1.5])
    ap.add_argument("--g", type=float, nargs="+", default=[0.1, 0.3])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.0, 0.15])
    ap.add_argument("--trunc-n", type=int, default=800)
    args = ap.parse_args()

    header = f"{'family':8} {'m':>2} {'lam':>5} {'g':>5} {'eps':>5} " \
             f"{'operator':>22} {'|int-op|':>10} {'|ser-op|':>10}"
    print(header)
    print("-" * len(header))
    for lam in args.lam:
        for g in args.g:
            for eps in args.eps:
                for name, family in FAMILIES.items():
                    for m in (1, 2):
                        op = operator_value(name, lam, g, eps, m, args.trunc_n)
                        ig = r_m_integral(family, lam, g, eps, m).value
                        if m == 1 and name in ("flat", "plus", "minus"):
                            ser = r_1_series(family, lam, g, eps).value
                            ser_dev = f"{abs(ser - op):10.2e}"
                        else:
                            ser_dev = f"{'-':>10}"
                        print(
                            f"{name:8} {m:>2} {lam:5.2f} {g:5.2f} {eps:5.2f} "
                            f"{op.real:22.15f} {abs(ig - op):10.2e} {ser_dev}"
                        )


if __name__ == "__main__":
    main()
