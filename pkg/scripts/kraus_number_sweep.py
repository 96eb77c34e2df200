"""Kraus number of random gluings versus the count of unit singular values of C.

For each instance, plants a singular spectrum with a chosen number of exact
ones, builds the gluing and compares its Choi rank with K1 + K2 - #ones.
Prints CSV: d1,d2,k1,k2,ones,predicted,choi_rank.
"""

from dataclasses import dataclass

import numpy as np

from _config import parse_config
from cpmglue import channel as ch
from cpmglue import rand
from cpmglue.gluing import GluingMatrix, analyze, build_gluing
from cpmglue.subspace import BlockSplit


@dataclass
class Config:
    instances: int = 200
    max_dim: int = 3
    seed: int = 0


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print("d1,d2,k1,k2,ones,predicted,choi_rank")
    mismatches = 0
    for _ in range(cfg.instances):
        d1, d2 = (int(x) for x in rng.integers(1, cfg.max_dim + 1, size=2))
        phi1 = ch.li_kraus(rand.tp_channel(rng, d1, d1))
        phi2 = ch.li_kraus(rand.tp_channel(rng, d2, d2))
        k1, k2 = len(phi1), len(phi2)
        r = min(k1, k2)
        ones = int(rng.integers(0, r + 1))
        sing = np.concatenate([np.ones(ones), rng.uniform(0.0, 0.95, r - ones)])
        c = rand.planted_matrix(rng, k1, k2, sing)
        phi = build_gluing(phi1, phi2, GluingMatrix(c, phi1, phi2), BlockSplit.square(d1, d2))
        predicted = analyze(c).predicted_kraus_number
        rank = ch.classify(phi).kraus_number
        mismatches += predicted != rank
        print(f"{d1},{d2},{k1},{k2},{ones},{predicted},{rank}")
    print(f"# mismatches: {mismatches}/{cfg.instances}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
