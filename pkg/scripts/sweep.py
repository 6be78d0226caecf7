#!/usr/bin/env python3
"""Sweep q up to a bound: two-quotient starters for q = 1 mod 4, Dinitz starters
for q = 3 mod 4, and the coset-pair witness scan. Prints one summary line per
family and lists every q where something failed or a diagnostic fired."""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from starter_forge import oracle
from starter_forge.cli import sweep_row, two_quotient_orders
from starter_forge.cyclotomy import cosets_for
from starter_forge.ffield import field_of_order, prime_power
from starter_forge.starter import coset_pair_table, dinitz_arrays, dinitz_betas, verify_batch


@dataclass
class SweepConfig:
    qmax: int = 2000
    dinitz: bool = True
    witnesses: bool = True


def dinitz_orders(qmax: int) -> list[int]:
    out = []
    for q in range(7, qmax + 1, 4):
        try:
            prime_power(q)
        except ValueError:
            continue
        out.append(q)
    return out


def run(cfg: SweepConfig) -> int:
    failures = 0
    start = time.perf_counter()
    qs = two_quotient_orders(cfg.qmax)
    bad = [r.q for r in map(sweep_row, qs) if not r.ok]
    failures += len(bad)
    print(f"two-quotient: {len(qs)} orders, failures {bad} ({time.perf_counter() - start:.1f}s)")

    if cfg.dinitz:
        start = time.perf_counter()
        bad = []
        orders = dinitz_orders(cfg.qmax)
        for q in orders:
            F = field_of_order(q)
            xs, ys = dinitz_arrays(F, dinitz_betas(F))
            main = verify_batch(F, xs, ys)
            ref = oracle.oracle_verify_batch(F, xs, ys)
            if not all(a.is_strong and a.verdict == b.verdict for a, b in zip(main, ref)):
                bad.append(q)
        failures += len(bad)
        print(f"dinitz: {len(orders)} orders, failures {bad} ({time.perf_counter() - start:.1f}s)")

    if cfg.witnesses:
        start = time.perf_counter()
        fired = {}
        for q in qs:
            sys = cosets_for(q)
            nqr = np.flatnonzero(sys.F.residue_table == -1)
            for sign in (1, -1):
                missing = int(np.count_nonzero(coset_pair_table(sys, nqr, sign)[:, 0] == 0))
                if missing:
                    fired[(q, sign)] = missing
        # witness gaps are reported, not counted as construction failures
        print(f"coset-pair witnesses: no pair for (q, sign): beta count {fired} ({time.perf_counter() - start:.1f}s)")
    return 1 if failures else 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qmax", type=int, default=SweepConfig.qmax)
    parser.add_argument("--no-dinitz", action="store_true")
    parser.add_argument("--no-witnesses", action="store_true")
    args = parser.parse_args()
    return run(SweepConfig(args.qmax, not args.no_dinitz, not args.no_witnesses))


if __name__ == "__main__":
    raise SystemExit(main())
