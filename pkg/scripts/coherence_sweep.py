"""Coherence kept by gluings as the gluing matrix is scaled toward zero.

For the unitary family the metric equals r. For random gluings of random
TP channels, ``t * C`` is swept over t in [0, 1]; the metric is affine in t
because the cross block of the output is linear in C.
Prints CSV: family,instance,t,coherence.
"""

from dataclasses import dataclass

import numpy as np

from _config import parse_config
from cpmglue import constructions as cs
from cpmglue import channel as ch
from cpmglue import rand
from cpmglue.gluing import build_gluing
from cpmglue.subspace import BlockSplit


@dataclass
class Config:
    instances: int = 5
    steps: int = 11
    dim: int = 2
    seed: int = 1


def random_probe(rng, d1, d2):
    a = rng.uniform(0.1, 0.9)
    return cs.SuperpositionProbe(rand.unit_vector(rng, d1), rand.unit_vector(rng, d2),
                                 np.sqrt(a), np.sqrt(1 - a))


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    d = cfg.dim
    split = BlockSplit.square(d, d)
    ts = np.linspace(0.0, 1.0, cfg.steps)
    print("family,instance,t,coherence")
    for i in range(cfg.instances):
        u1, u2 = rand.unitary(rng, d), rand.unitary(rng, d)
        probe = random_probe(rng, d, d)
        theta = rng.uniform(-np.pi, np.pi)
        for t in ts:
            m = cs.coherence_metric(cs.unitary_gluing(u1, u2, t, theta), split, probe)
            print(f"unitary,{i},{t:.3f},{m:.12g}")
    for i in range(cfg.instances):
        phi1 = ch.li_kraus(rand.tp_channel(rng, d, d))
        phi2 = ch.li_kraus(rand.tp_channel(rng, d, d))
        g = rand.gluing_matrix(rng, phi1, phi2, sigma_max=1.0)
        probe = random_probe(rng, d, d)
        for t in ts:
            m = cs.coherence_metric(build_gluing(phi1, phi2, g.with_c(t * g.c), split), split, probe)
            print(f"random,{i},{t:.3f},{m:.12g}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
