"""Build every validated parameter set for a list of settings and verify it.

    python3 scripts/sweep_verify.py --settings Z2:1,1:assoc Z2xZ2:2,2:lie
"""

import argparse
import time
from dataclasses import dataclass, field

from gradedbloc import AbGroup, BlockProfile, build, verify_grading
from gradedbloc.classify import raw_parameters, type2_data, typeII_coarsening_reference
from gradedbloc.gradedmat import coarsen, same_components

DEFAULT = ["Z2:1,1:assoc", "Z2:1,1:jordan", "Z4:1,1,1:lie", "Z2xZ2:2:lie", "Z2xZ2:2,2:lie",
           "Z2xZ2:1,1,1:jordan", "Z4:3:jordan", "Z2xZ4:2,2:jordan"]


@dataclass
class SweepConfig:
    settings: list = field(default_factory=lambda: list(DEFAULT))
    limit: int = 0  # 0 means every parameter set


def sweep(cfg: SweepConfig):
    rows = []
    for spec in cfg.settings:
        group, blocks, case = spec.split(":")
        G, P = AbGroup.parse(group), BlockProfile.parse(blocks)
        t0 = time.time()
        params = raw_parameters(G, P, case)
        if cfg.limit:
            params = params[: cfg.limit]
        bad = coarse_bad = n2 = 0
        for p in params:
            A = build(p, P, case)
            bad += not verify_grading(A).ok
            if p.type == "II":
                n2 += 1
                pi = type2_data(p.T, p.beta).pi
                coarse_bad += not same_components(coarsen(A, pi), typeII_coarsening_reference(p, P, case))
        rows.append((spec, len(params), n2, bad, coarse_bad, time.time() - t0))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--settings", nargs="*", default=DEFAULT, help="group:blocks:case entries")
    ap.add_argument("--limit", type=int, default=0)
    args = ap.parse_args()
    rows = sweep(SweepConfig(args.settings, args.limit))
    print(f"{'setting':24} {'params':>7} {'typeII':>7} {'bad':>4} {'coarse':>7} {'sec':>6}")
    for spec, n, n2, bad, cb, dt in rows:
        print(f"{spec:24} {n:7d} {n2:7d} {bad:4d} {cb:7d} {dt:6.2f}")


if __name__ == "__main__":
    main()
