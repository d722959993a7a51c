"""How often sampling refutes Jordan constancy for random projected tensors.

For each signature, draw random tensors and record the fraction with a
Jordan witness on each cone, together with the observed rank statistics.

    python scripts/falsification_rate.py --signatures 2,3 2,2 0,3 --tensors 50 --samples 100
"""

import argparse
from collections import Counter
from dataclasses import dataclass, field

from szabo.pseudo import PseudoSpace, Signature
from szabo.sampling import CONES, cone_feasible
from szabo.spectral import analyze_cone, cone_seed
from szabo.tensors import random_acdt


@dataclass
class Config:
    signatures: list = field(default_factory=lambda: [Signature(2, 3)])
    tensors: int = 50
    samples: int = 100
    seed: int = 0
    tol: float = 1e-9


def run(cfg: Config):
    rows = []
    for sig in cfg.signatures:
        sp = PseudoSpace.of(sig.p, sig.q)
        hits = Counter()
        ranks = {c: Counter() for c in CONES}
        for k in range(cfg.tensors):
            RR = random_acdt(sp, [cfg.seed, k])
            for cone in CONES:
                if not cone_feasible(sp, cone):
                    continue
                a = analyze_cone(RR, cone, cfg.samples, cone_seed(cfg.seed + k, cone), cfg.tol)
                hits[cone] += a.jordan.found
                ranks[cone].update(a.ranks)
        rows.append((sig, hits, ranks))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--signatures", nargs="+", type=Signature.parse, default=[Signature(2, 3)])
    ap.add_argument("--tensors", type=int, default=50)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = Config(args.signatures, args.tensors, args.samples, args.seed)
    for sig, hits, ranks in run(cfg):
        print(f"signature {sig}")
        for cone in CONES:
            if ranks[cone]:
                rate = hits[cone] / cfg.tensors
                print(f"  {cone:9s} witness rate {rate:5.2f}   ranks {dict(sorted(ranks[cone].items()))}")


if __name__ == "__main__":
    main()
