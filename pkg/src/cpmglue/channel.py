"""
Completely positive maps in Kraus form and their Choi matrices.

Conventions (fixed package-wide):

* Choi matrix ``J = sum_ij phi(E_ij) (x) E_ij`` with ``E_ij`` the source
  matrix units, so row/column index ``t * S + s`` pairs target index ``t``
  with source index ``s``.
* ``vec(V)`` of a ``T x S`` operator is its row-major ravel, which makes
  ``J = sum_k vec(V_k) vec(V_k)^dagger``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numerics as nx
from .errors import InvalidInput, NotCompletelyPositive, NotSameChannel

TP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPM ``Q -> sum_k V_k Q V_k^dagger`` from a source to a target space."""

    source_dim: int
    target_dim: int
    kraus: tuple

    def __post_init__(self):
        if self.source_dim < 1 or self.target_dim < 1:
            raise InvalidInput("channel dimensions must be >= 1")
        if len(self.kraus) == 0:
            raise InvalidInput("Kraus list must be non-empty")
        ops = []
        for k, v in enumerate(self.kraus):
            v = nx.as_matrix(v, name=f"kraus[{k}]").copy()
            if v.shape != (self.target_dim, self.source_dim):
                raise InvalidInput(
                    f"kraus[{k}] has shape {v.shape}, expected "
                    f"({self.target_dim}, {self.source_dim})")
            v.setflags(write=False)
            ops.append(v)
        object.__setattr__(self, "kraus", tuple(ops))

    @classmethod
    def from_ops(cls, ops: Sequence) -> "KrausChannel":
        ops = [nx.as_matrix(v) for v in ops]
        if not ops:
            raise InvalidInput("Kraus list must be non-empty")
        t, s = ops[0].shape
        return cls(source_dim=s, target_dim=t, kraus=tuple(ops))

    def __len__(self):
        return len(self.kraus)

    def __call__(self, q):
        return apply(self, q)

    def vecs(self) -> np.ndarray:
        """Kraus operators as columns of a ``(T*S) x K`` matrix."""
        return np.column_stack([v.reshape(-1) for v in self.kraus])


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    matrix: np.ndarray
    source_dim: int
    target_dim: int


@dataclass(frozen=True)
class ChannelReport:
    is_cp: bool
    is_tp: bool
    kraus_number: int
    tp_residual: float
    min_choi_eigenvalue: float


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d, d, (np.eye(d),))


def unitary_channel(u) -> KrausChannel:
    u = nx.as_matrix(u)
    if not nx.is_unitary(u):
        raise InvalidInput("operator is not unitary")
    return KrausChannel.from_ops([u])


def apply(phi: KrausChannel, q) -> np.ndarray:
    q = nx.as_matrix(q, name="input")
    if q.shape != (phi.source_dim, phi.source_dim):
        raise InvalidInput(f"input has shape {q.shape}, channel source is {phi.source_dim}")
    out = np.zeros((phi.target_dim, phi.target_dim), dtype=np.complex128)
    for v in phi.kraus:
        out += v @ q @ v.conj().T
    return out


def choi(phi: KrausChannel) -> ChoiMatrix:
    x = phi.vecs()
    return ChoiMatrix(matrix=x @ x.conj().T, source_dim=phi.source_dim, target_dim=phi.target_dim)


def apply_choi(c: ChoiMatrix, q) -> np.ndarray:
    """phi(Q) recovered from the Choi matrix alone: ``sum_ij Q_ij J[(.,i),(.,j)]``."""
    q = nx.as_matrix(q)
    s, t = c.source_dim, c.target_dim
    blocks = c.matrix.reshape(t, s, t, s)
    return np.einsum("aibj,ij->ab", blocks, q)


def tp_residual(phi: KrausChannel) -> float:
    acc = sum(v.conj().T @ v for v in phi.kraus)
    return float(np.linalg.norm(acc - np.eye(phi.source_dim)))


def is_tp(phi: KrausChannel, tol: float = TP_TOL) -> bool:
    return tp_residual(phi) <= tol


def classify(phi: KrausChannel, tol: float = nx.DEFAULT_TOL) -> ChannelReport:
    j = choi(phi).matrix
    vals = np.linalg.eigvalsh(j)
    scale = max(1.0, float(np.max(np.abs(vals))))
    res = tp_residual(phi)
    return ChannelReport(
        is_cp=bool(vals.min() >= -tol * scale),
        is_tp=res <= tol,
        kraus_number=nx.numerical_rank(vals, tol),
        tp_residual=res,
        min_choi_eigenvalue=float(vals.min()),
    )


def kraus_number(phi: KrausChannel, tol: float = nx.DEFAULT_TOL) -> int:
    return nx.numerical_rank(np.linalg.eigvalsh(choi(phi).matrix), tol)


def from_choi(j, source_dim: int, target_dim: int, tol: float = nx.DEFAULT_TOL) -> KrausChannel:
    """Canonical linearly independent Kraus set of the map with Choi matrix ``j``.

    Operator k is ``sqrt(lambda_k) * unvec(eigvec_k)`` with eigenvalues in
    descending order and eigenvectors in the numerics gauge. The zero map
    comes back as a single zero operator.
    """
    j = nx.as_matrix(j, name="choi")
    n = source_dim * target_dim
    if j.shape != (n, n):
        raise InvalidInput(f"Choi matrix has shape {j.shape}, expected ({n}, {n})")
    eig = nx.hermitian_eigen(j)
    top = float(np.max(np.abs(eig.values)))
    if eig.values[-1] < -tol * max(1.0, top):
        raise NotCompletelyPositive(f"Choi matrix has eigenvalue {eig.values[-1]:.3e}")
    keep = eig.values > nx.cutoff(top, tol)
    ops = [np.sqrt(lam) * eig.vectors[:, k].reshape(target_dim, source_dim)
           for k, lam in enumerate(eig.values) if keep[k]]
    if not ops:
        ops = [np.zeros((target_dim, source_dim), dtype=np.complex128)]
    return KrausChannel(source_dim, target_dim, tuple(ops))


def li_kraus(phi: KrausChannel, tol: float = nx.DEFAULT_TOL) -> KrausChannel:
    return from_choi(choi(phi).matrix, phi.source_dim, phi.target_dim, tol)


def is_linearly_independent(ops, tol: float = nx.DEFAULT_TOL) -> bool:
    x = np.column_stack([nx.as_matrix(v).reshape(-1) for v in ops])
    if x.shape[1] > x.shape[0]:
        return False
    s = np.linalg.svd(x, compute_uv=False)
    return bool(s[-1] > nx.cutoff(s[0], tol))


def range_isometry(projector) -> np.ndarray:
    """Columns spanning the range of an orthogonal projector, numerics gauge."""
    eig = nx.hermitian_eigen(projector)
    return eig.vectors[:, eig.values > 0.5]


def restrict(phi: KrausChannel, projector, side: str) -> KrausChannel:
    """Restriction in source (``V_k P``) or target (``P V_k``), compressed to the range of P."""
    p = nx.as_matrix(projector, name="projector")
    if not nx.is_projector(p):
        raise InvalidInput("restrict needs an orthogonal projector")
    if side == "source":
        if p.shape[0] != phi.source_dim:
            raise InvalidInput("projector does not act on the source space")
        iso = range_isometry(p)
        if iso.shape[1] == 0:
            raise InvalidInput("projector is zero")
        ops = [v @ iso for v in phi.kraus]
        return KrausChannel(iso.shape[1], phi.target_dim, tuple(ops))
    if side == "target":
        if p.shape[0] != phi.target_dim:
            raise InvalidInput("projector does not act on the target space")
        iso = range_isometry(p)
        if iso.shape[1] == 0:
            raise InvalidInput("projector is zero")
        ops = [iso.conj().T @ v for v in phi.kraus]
        return KrausChannel(phi.source_dim, iso.shape[1], tuple(ops))
    raise InvalidInput(f"side must be 'source' or 'target', got {side!r}")


def _check_same_dims(a: KrausChannel, b: KrausChannel):
    if (a.source_dim, a.target_dim) != (b.source_dim, b.target_dim):
        raise InvalidInput(
            f"dimension mismatch: {a.source_dim}->{a.target_dim} vs {b.source_dim}->{b.target_dim}")


def distance(a: KrausChannel, b: KrausChannel) -> float:
    """Frobenius norm of the Choi difference."""
    _check_same_dims(a, b)
    return float(np.linalg.norm(choi(a).matrix - choi(b).matrix))


def kraus_unitary_relation(rep_a: KrausChannel, rep_b: KrausChannel) -> np.ndarray:
    """Unitary U with ``rep_b[i] = sum_j U[i, j] rep_a[j]``."""
    _check_same_dims(rep_a, rep_b)
    if not (is_linearly_independent(rep_a.kraus) and is_linearly_independent(rep_b.kraus)):
        raise InvalidInput("both Kraus sets must be linearly independent")
    d = distance(rep_a, rep_b)
    if d > 1e-9 * max(1.0, float(np.linalg.norm(choi(rep_a).matrix))):
        raise NotSameChannel(f"representations differ by Choi distance {d:.3e}")
    if len(rep_a) != len(rep_b):
        raise InvalidInput("linearly independent representations of one map must have equal length")
    xa, xb = rep_a.vecs(), rep_b.vecs()
    # xb = xa @ U^T
    ut, *_ = np.linalg.lstsq(xa, xb, rcond=None)
    return ut.T


def scaled(phi: KrausChannel, p: float) -> KrausChannel:
    if p < 0:
        raise InvalidInput("scale factor must be non-negative")
    return KrausChannel(phi.source_dim, phi.target_dim, tuple(np.sqrt(p) * v for v in phi.kraus))


def mixture(weighted: Sequence) -> KrausChannel:
    """Sum of ``p_i * phi_i`` for (p_i, phi_i) pairs with p_i >= 0."""
    ops = []
    first = weighted[0][1]
    for p, phi in weighted:
        _check_same_dims(first, phi)
        ops.extend(scaled(phi, p).kraus)
    return KrausChannel(first.source_dim, first.target_dim, tuple(ops))


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """``outer(inner(Q))``."""
    if inner.target_dim != outer.source_dim:
        raise InvalidInput("composition dimension mismatch")
    ops = [a @ b for a in outer.kraus for b in inner.kraus]
    return KrausChannel(inner.source_dim, outer.target_dim, tuple(ops))


def tensor(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    ops = [np.kron(x, y) for x in a.kraus for y in b.kraus]
    return KrausChannel(a.source_dim * b.source_dim, a.target_dim * b.target_dim, tuple(ops))
