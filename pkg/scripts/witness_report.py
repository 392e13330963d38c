"""Random parameter pairs: how often the verdict is witnessed, refuted, or left open."""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from gradedbloc import AbGroup, BlockProfile, iso_decide
from gradedbloc.classify import TypeIIParams, TypeIParams, raw_parameters
from gradedbloc.oracle import refute_or_confirm

SETTINGS = [("Z2", "1,1", "jordan"), ("Z4", "1,1,1", "lie"), ("Z3", "1,1,1", "assoc"),
            ("Z2xZ2", "2,2", "lie"), ("Z2xZ2", "1,1,1", "jordan"), ("Z2xZ4", "2", "lie")]


@dataclass
class WitnessConfig:
    pairs: int = 200
    seed: int = 0


def translate(p, g):
    G = p.group
    kappas = tuple(k.translate(g) for k in p.kappas)
    if p.type == "II":
        return TypeIIParams(p.T, p.beta, G.sub(p.g0, G.smul(2, g)), kappas)
    return TypeIParams(p.T, p.beta, kappas)


def run(cfg: WitnessConfig):
    rng = random.Random(cfg.seed)
    cache = {}
    tally = Counter()
    obstructions = Counter()
    for _ in range(cfg.pairs):
        group, blocks, case = rng.choice(SETTINGS)
        P = BlockProfile.parse(blocks)
        if (group, blocks, case) not in cache:
            cache[group, blocks, case] = raw_parameters(AbGroup.parse(group), P, case)
        params = cache[group, blocks, case]
        p1 = rng.choice(params)
        p2 = translate(p1, rng.choice(p1.group.elements())) if rng.random() < 0.4 else rng.choice(params)
        verdict = iso_decide(p1, p2, P, case)
        ev = refute_or_confirm(p1, p2, P, case).evidence
        if verdict.isomorphic:
            tally["witnessed" if ev["confirmed"] else "witness failed"] += 1
        elif ev.get("status") == "incomplete":
            tally["incomplete"] += 1
        else:
            tally["refuted"] += 1
            obstructions[ev["obstruction"]] += 1
    return tally, obstructions


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=WitnessConfig.pairs)
    ap.add_argument("--seed", type=int, default=WitnessConfig.seed)
    args = ap.parse_args()
    tally, obstructions = run(WitnessConfig(args.pairs, args.seed))
    for k, v in sorted(tally.items()):
        print(f"{k:16} {v}")
    print("first obstruction used:", dict(obstructions))


if __name__ == "__main__":
    main()
