#!/usr/bin/env python3
"""Scan the confluence limit: 2^n zeta(Bergman(nu); n, 2 lam - nu) with
coupling g/sqrt(nu) approaches the one-photon zeta value as nu grows.
"""

import argparse

from rabi_zeta.operator_oracle import OnePhoton
from rabi_zeta.zeta_values import ZetaRequest, confluence_scan, zeta_value


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, default=0.2)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--lam", type=float, default=1.5)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--nu", type=float, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--trunc-n", type=int, default=400)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    ref = zeta_value(
        ZetaRequest(
            OnePhoton(args.g, args.delta, args.eps), args.n, args.lam,
            trunc_n=args.trunc_n,
        )
    )
    print(f"one-photon reference: {ref.value.real:.15f}  (abs_error {ref.abs_error:.2e})")
    rows = confluence_scan(
        args.g, args.delta, args.eps, args.lam, args.n, args.nu,
        trunc_n=args.trunc_n, threads=args.threads,
    )
    print(f"{'nu':>8} {'scaled zeta':>22} {'deviation':>12}")
    for nu, scaled, dev in rows:
        print(f"{nu:8.1f} {scaled.real:22.15f} {dev:12.3e}")


if __name__ == "__main__":
    main()
