#!/usr/bin/env python3
"""Cross-validate the zeta special values across the three routes.

For each benchmark point the coupling-series routes (operator and integral)
and the truncated-eigenvalue oracle are evaluated; the table reports the
values, the route deviations, and whether the series value falls inside the
oracle's reported error bar.
"""

import argparse
import time

from rabi_zeta.operator_oracle import Ncho, OnePhoton, TwoPhoton
from rabi_zeta.zeta_values import ZetaRequest, zeta_value

CASES = [
    ("1-photon", OnePhoton(g=0.2, delta=0.3, eps=0.1), 2, 1.0),
    ("1-photon", OnePhoton(g=0.1, delta=0.2, eps=0.0), 3, 1.5),
    ("2-photon", TwoPhoton(g=0.2, delta=0.3, eps=0.1), 2, 1.0),
    ("2-photon", TwoPhoton(g=0.1, delta=0.2, eps=0.0), 3, 1.5),
    ("osc-pair", Ncho(alpha=2.0, beta=1.2, eta=0.1), 2, 0.8),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trunc-n", type=int, default=1600)
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    print(
        f"{'model':9} {'n':>2} {'lam':>4} {'series value':>20} "
        f"{'|int-op|':>10} {'|eig-op|':>10} {'eig err':>9} {'inside':>6} {'sec':>6}"
    )
    for name, model, n, lam in CASES:
        t0 = time.perf_counter()
        op = zeta_value(
            ZetaRequest(model, n, lam, method="series_operator",
                        trunc_n=args.trunc_n, tol=args.tol)
        )
        ig = zeta_value(
            ZetaRequest(model, n, lam, method="series_integral",
                        trunc_n=args.trunc_n, tol=args.tol)
        )
        eo = zeta_value(
            ZetaRequest(model, n, lam, method="eigen_oracle", trunc_n=args.trunc_n)
        )
        inside = abs(op.value - eo.value) <= eo.abs_error
        print(
            f"{name:9} {n:>2} {lam:4.1f} {op.value.real:20.14f} "
            f"{abs(ig.value - op.value):10.2e} {abs(eo.value - op.value):10.2e} "
            f"{eo.abs_error:9.2e} {str(inside):>6} {time.perf_counter() - t0:6.1f}"
        )


if __name__ == "__main__":
    main()
