#!/usr/bin/env python3
"""Cross-check the closed-form residual scan against the cochain differential.

Draws random fiber values (on and off the distinguished family) and random
torus metrics, then compares the two pluriclosed scans component by
component. Also re-verifies the structure-constant identities per type.

Example:
    python3 scripts/oracle_crosscheck.py --types A2,B2,C3 --samples 20
"""

import argparse
import sys
import time

import numpy as np

from sktflow import (
    FactorSpec,
    GroupSpec,
    Normalization,
    SimpleType,
    build_root_system,
    family_bound,
    is_pluriclosed,
    pluriclosed_family,
    structure_constants,
    verify_identities,
)


def parse_args(argv):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--types", default="A2,A3,B2,B3,C3,G2")
    ap.add_argument("--norm", default="long2", choices=["long2", "short2", "killing"])
    ap.add_argument("--samples", type=int, default=10, help="random metrics per type")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-10, help="max allowed scan disagreement")
    return ap.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    rng = np.random.default_rng(args.seed)
    norm = Normalization.parse(args.norm)
    bad = 0
    for token in args.types.split(","):
        token = token.strip()
        stype = SimpleType(token[0].upper(), int(token[1:]))
        t0 = time.perf_counter()
        rs = build_root_system(stype, norm)
        rep = verify_identities(rs, structure_constants(rs), cocycle_limit=5000, seed=args.seed)
        ident = "ok" if rep.passed else "FAILED"
        g = GroupSpec([FactorSpec(stype, norm)])
        worst = 0.0
        for k in range(args.samples):
            if k % 2 == 0:
                vals = rng.uniform(family_bound(rs) + 1e-3, 2.5, rs.rank)
                h = pluriclosed_family(g, tuple(vals))
            else:
                x = rng.uniform(0.4, 2.5, rs.npositive)
                a = rng.normal(size=(rs.rank, rs.rank))
                h = g.build(x=[tuple(x)], torus=a @ a.T + rs.rank * np.eye(rs.rank))
            closed = is_pluriclosed(h)
            brute = is_pluriclosed(h, mode="brute_force")
            worst = max(
                worst,
                abs(closed.max_residual - brute.max_residual),
                abs(closed.skt1_max - brute.skt1_max),
                abs(closed.skt2_max - brute.skt2_max),
            )
            if closed.verdict != brute.verdict:
                worst = float("inf")
        status = "ok" if worst < args.tol else "DISAGREE"
        if status != "ok" or ident != "ok":
            bad += 1
        print(
            f"{token:<4} identities {ident:<7} scan agreement {worst:.3e} {status:<9} "
            f"({time.perf_counter() - t0:.2f}s)"
        )
    if bad:
        print(f"{bad} type(s) failed")
        return 1
    print("all types agree")
    return 0


if __name__ == "__main__":
    sys.exit(main())
