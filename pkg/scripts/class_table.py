"""Count isomorphism classes of elementary-type gradings for small groups and profiles."""

import argparse
import itertools
import time
from dataclasses import dataclass

from gradedbloc import AbGroup, BlockProfile, enumerate_classes


@dataclass
class TableConfig:
    groups: tuple = ("1", "Z2", "Z3", "Z4", "Z2xZ2")
    profiles: tuple = ("1,1", "2", "1,1,1", "2,2", "1,2,1")
    cases: tuple = ("assoc", "lie", "jordan")
    budget: int = 200000


def table(cfg: TableConfig):
    out = []
    for group, blocks, case in itertools.product(cfg.groups, cfg.profiles, cfg.cases):
        t0 = time.time()
        classes = enumerate_classes(AbGroup.parse(group), BlockProfile.parse(blocks), case, cfg.budget)
        n2 = sum(p.type == "II" for p in classes)
        out.append((group, blocks, case, len(classes), n2, time.time() - t0))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--groups", nargs="*", default=list(TableConfig.groups))
    ap.add_argument("--profiles", nargs="*", default=list(TableConfig.profiles))
    ap.add_argument("--cases", nargs="*", default=list(TableConfig.cases))
    ap.add_argument("--budget", type=int, default=TableConfig.budget)
    args = ap.parse_args()
    cfg = TableConfig(tuple(args.groups), tuple(args.profiles), tuple(args.cases), args.budget)
    print(f"{'group':8} {'blocks':8} {'case':7} {'classes':>8} {'typeII':>7} {'sec':>6}")
    for group, blocks, case, n, n2, dt in table(cfg):
        print(f"{group:8} {blocks:8} {case:7} {n:8d} {n2:7d} {dt:6.2f}")


if __name__ == "__main__":
    main()
