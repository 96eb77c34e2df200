"""Random instances for tests and experiment scripts. All take a numpy Generator."""

from __future__ import annotations

import numpy as np

from .channel import KrausChannel
from .gluing import GluingMatrix


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def unitary(rng, d: int) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(rng, d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def isometry(rng, rows: int, cols: int) -> np.ndarray:
    q, _ = np.linalg.qr(ginibre(rng, rows, cols))
    return q


def unit_vector(rng, d: int) -> np.ndarray:
    v = ginibre(rng, d, 1)[:, 0]
    return v / np.linalg.norm(v)


def density_matrix(rng, d: int, rank: int = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = ginibre(rng, d, rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def psd(rng, d: int, rank: int = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = ginibre(rng, d, rank)
    return g @ g.conj().T


def tp_channel(rng, s: int, t: int, k: int = None) -> KrausChannel:
    """TP channel with k Kraus operators from a random isometry C^s -> C^t (x) C^k.

    Linearly independent whenever ``k <= s * t`` (generically).
    """
    if k is None:
        k = int(rng.integers(1, s * t + 1))
    if k * t < s:
        k = -(-s // t)
    iso = isometry(rng, k * t, s)
    return KrausChannel(s, t, tuple(iso[i * t:(i + 1) * t, :] for i in range(k)))


def cp_channel(rng, s: int, t: int, k: int) -> KrausChannel:
    return KrausChannel(s, t, tuple(ginibre(rng, t, s) for _ in range(k)))


def contraction(rng, n: int, m: int, sigma_max: float = None) -> np.ndarray:
    """Random N x M matrix rescaled so its largest singular value is ``sigma_max``.

    Defaults to a uniform draw in [0, 1].
    """
    c = ginibre(rng, n, m)
    smax = rng.uniform(0.0, 1.0) if sigma_max is None else sigma_max
    return c * (smax / np.linalg.norm(c, 2))


def planted_matrix(rng, n: int, m: int, singulars) -> np.ndarray:
    """N x M matrix with exactly the given singular values (length min(n, m))."""
    k = min(n, m)
    u = unitary(rng, n)[:, :k]
    v = unitary(rng, m)[:, :k]
    return (u * np.asarray(singulars, dtype=float)) @ v.conj().T


def gluing_matrix(rng, phi1: KrausChannel, phi2: KrausChannel, sigma_max: float = None) -> GluingMatrix:
    return GluingMatrix(contraction(rng, len(phi1), len(phi2), sigma_max), phi1, phi2)


def mix_rep(rep: KrausChannel, u) -> KrausChannel:
    """Kraus set ``V'_i = sum_j u[i, j] V_j``."""
    ops = [sum(u[i, j] * rep.kraus[j] for j in range(len(rep))) for i in range(len(rep))]
    return KrausChannel(rep.source_dim, rep.target_dim, tuple(ops))
