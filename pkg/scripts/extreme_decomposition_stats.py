"""Size and accuracy of extreme-point decompositions of random gluing matrices.

Prints CSV: n,m,sigma_max,terms,weight_error,recombination_error,unitarity_error.
"""

from dataclasses import dataclass

import numpy as np

from _config import parse_config
from cpmglue import rand
from cpmglue.gluing import extreme_decompose


@dataclass
class Config:
    instances: int = 100
    max_rows: int = 3
    max_cols: int = 4
    seed: int = 2


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print("n,m,sigma_max,terms,weight_error,recombination_error,unitarity_error")
    for _ in range(cfg.instances):
        n = int(rng.integers(1, cfg.max_rows + 1))
        m = int(rng.integers(1, cfg.max_cols + 1))
        c = rand.contraction(rng, n, m)
        terms = extreme_decompose(c)
        w = np.array([t[0] for t in terms])
        rec = float(np.max(np.abs(sum(wt * d for wt, d in terms) - c)))
        unit = max(float(np.max(np.abs((d @ d.conj().T if n <= m else d.conj().T @ d) - np.eye(min(n, m)))))
                   for _, d in terms)
        smax = float(np.linalg.norm(c, 2))
        print(f"{n},{m},{smax:.6f},{len(terms)},{abs(w.sum() - 1):.3e},{rec:.3e},{unit:.3e}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
