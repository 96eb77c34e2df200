"""
Dense complex linear algebra with deterministic gauges.

Every decomposition here returns factors in a fixed phase gauge so that
downstream Kraus extraction is bit-reproducible: the largest-magnitude
component of each eigen/singular vector is made real and non-negative
(lowest index wins a tie). Rank and positivity decisions use a relative
cutoff against the largest eigen/singular value with an absolute floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

DEFAULT_TOL = 1e-9
ABS_FLOOR = 1e-12
HERMITIAN_TOL = 1e-10
# relative spread under which eigenvalues are treated as one degenerate cluster
_CLUSTER_TOL = 1e-10


def as_matrix(m, name="matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array and reject NaN/Inf."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise InvalidInput(f"{name} must be 2-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise InvalidInput(f"{name} is empty")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def as_vector(v, name="vector") -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim == 2 and 1 in a.shape:
        a = a.reshape(-1)
    if a.ndim != 1 or a.size == 0:
        raise InvalidInput(f"{name} must be a non-empty 1-D vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def cutoff(scale: float, tol: float = DEFAULT_TOL) -> float:
    return max(tol * scale, ABS_FLOOR)


def hermitian_residual(h: np.ndarray) -> float:
    return float(np.linalg.norm(h - h.conj().T))


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        return False
    return hermitian_residual(h) <= tol * max(1.0, float(np.linalg.norm(h)))


def _gauge_phases(vectors: np.ndarray) -> np.ndarray:
    """Unit phases p_k making ``vectors[:, k] * p_k`` gauge-fixed.

    The largest-magnitude entry of each column becomes real non-negative;
    the lowest index wins among entries tied with the maximum.
    """
    mags = np.abs(vectors)
    phases = np.ones(vectors.shape[1], dtype=np.complex128)
    for j in range(vectors.shape[1]):
        col = mags[:, j]
        top = col.max()
        if top == 0.0:
            continue
        idx = int(np.flatnonzero(col >= top * (1.0 - 1e-12))[0])
        z = vectors[idx, j]
        phases[j] = np.conj(z) / abs(z)
    return phases


def _phase_fix_columns(vectors: np.ndarray) -> np.ndarray:
    return vectors * _gauge_phases(vectors)


@dataclass(frozen=True, eq=False)
class SvdResult:
    left: np.ndarray
    singulars: np.ndarray
    right_adj: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singulars) @ self.right_adj


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def svd(m) -> SvdResult:
    """Thin SVD, singular values descending, left vectors gauge-fixed.

    The phase removed from each left singular vector is pushed onto the
    matching row of ``right_adj`` so the product is unchanged.
    """
    m = as_matrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    phases = _gauge_phases(u)
    return SvdResult(left=u * phases, singulars=s, right_adj=vh * phases.conj()[:, None])


def hermitian_eigen(h) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, values descending.

    Within a degenerate cluster the gauge-fixed vectors are ordered by
    descending lexicographic comparison of their (re, im) components.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise InvalidInput(f"hermitian_eigen needs a square matrix, got {h.shape}")
    if not is_hermitian(h):
        raise InvalidInput("matrix is not Hermitian within 1e-10")
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    w = w[::-1]
    v = _phase_fix_columns(v[:, ::-1])

    scale = max(1.0, float(np.max(np.abs(w))))
    order = []
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop - 1] - w[stop] <= _CLUSTER_TOL * scale:
            stop += 1
        block = list(range(start, stop))
        if len(block) > 1:
            keys = [tuple(np.round(np.column_stack([v[:, j].real, v[:, j].imag]).ravel(), 10))
                    for j in block]
            block = [j for _, j in sorted(zip(keys, block), key=lambda kv: kv[0], reverse=True)]
        order.extend(block)
        start = stop
    order = np.asarray(order)
    return HermitianEigen(values=w[order], vectors=v[:, order])


def spectral_norm(m) -> float:
    return float(np.linalg.norm(as_matrix(m), 2))


def is_psd(h, tol: float = DEFAULT_TOL) -> bool:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1] or not is_hermitian(h, max(tol, HERMITIAN_TOL)):
        raise InvalidInput("is_psd needs a Hermitian matrix")
    vals = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    scale = max(1.0, float(np.max(np.abs(vals))))
    return bool(vals.min() >= -tol * scale)


def pseudoinverse(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse; singular values below ``tol * sigma_max`` count as zero."""
    res = svd(m)
    s = res.singulars
    keep = s > cutoff(s[0] if s.size else 0.0, tol)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (res.right_adj.conj().T * inv) @ res.left.conj().T


def zero_space_projector(h, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the (numerical) kernel of a PSD matrix."""
    if not is_psd(h, tol):
        raise InvalidInput("zero_space_projector needs a PSD matrix")
    eig = hermitian_eigen(h)
    top = float(np.max(np.abs(eig.values)))
    zero = eig.values < tol * max(1.0, top)
    vecs = eig.vectors[:, zero]
    return vecs @ vecs.conj().T


def numerical_rank(values, tol: float = DEFAULT_TOL) -> int:
    """Count entries above the relative cutoff (values are eigen- or singular values)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    return int(np.sum(values > cutoff(float(np.max(np.abs(values))), tol)))


def trace_norm(m) -> float:
    return float(np.sum(np.linalg.svd(as_matrix(m), compute_uv=False)))


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))) <= tol * max(1, u.shape[0])


def is_projector(p, tol: float = 1e-10) -> bool:
    p = as_matrix(p)
    if p.shape[0] != p.shape[1]:
        return False
    return (float(np.linalg.norm(p @ p - p)) <= tol * max(1, p.shape[0])
            and hermitian_residual(p) <= tol)


def psd_sqrt(h) -> np.ndarray:
    eig = hermitian_eigen(h)
    vals = np.clip(eig.values, 0.0, None)
    return (eig.vectors * np.sqrt(vals)) @ eig.vectors.conj().T
