"""
Two-block orthogonal decompositions of source and target spaces.

Blocks are always canonical coordinate blocks: the first ``s1_dim`` source
coordinates span H_s1, the rest H_s2, and likewise for the target. A caller
with arbitrary subspaces conjugates by a basis change first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import channel as ch
from . import numerics as nx
from .channel import KrausChannel
from .errors import InvalidInput, InvalidSpTriple, NotSubspacePreserving


@dataclass(frozen=True)
class BlockSplit:
    s1_dim: int
    s2_dim: int
    t1_dim: int
    t2_dim: int

    def __post_init__(self):
        for name in ("s1_dim", "s2_dim", "t1_dim", "t2_dim"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InvalidInput(f"{name} must be an integer >= 1, got {v!r}")

    @classmethod
    def square(cls, d1: int, d2: int) -> "BlockSplit":
        return cls(d1, d2, d1, d2)

    @property
    def source_dim(self) -> int:
        return self.s1_dim + self.s2_dim

    @property
    def target_dim(self) -> int:
        return self.t1_dim + self.t2_dim

    def source_slice(self, block: int) -> slice:
        return slice(0, self.s1_dim) if block == 1 else slice(self.s1_dim, self.source_dim)

    def target_slice(self, block: int) -> slice:
        return slice(0, self.t1_dim) if block == 1 else slice(self.t1_dim, self.target_dim)

    def block_dims(self, block: int) -> tuple:
        """(source, target) dims of a diagonal block."""
        return (self.s1_dim, self.t1_dim) if block == 1 else (self.s2_dim, self.t2_dim)

    def projector(self, name: str) -> np.ndarray:
        """Full-space projector ``P_s1``, ``P_s2``, ``P_t1`` or ``P_t2``."""
        side, block = name[0], int(name[1])
        if side == "s":
            p = np.zeros((self.source_dim, self.source_dim))
            sl = self.source_slice(block)
        elif side == "t":
            p = np.zeros((self.target_dim, self.target_dim))
            sl = self.target_slice(block)
        else:
            raise InvalidInput(f"unknown projector {name!r}")
        p[sl, sl] = np.eye(sl.stop - sl.start)
        return p.astype(np.complex128)

    def with_ancilla(self, source_anc: int, target_anc: int) -> "BlockSplit":
        """Split of (H_s1 (x) a, H_s2 (x) a) -> (H_t1 (x) b, H_t2 (x) b), system-first ordering."""
        return BlockSplit(self.s1_dim * source_anc, self.s2_dim * source_anc,
                          self.t1_dim * target_anc, self.t2_dim * target_anc)


def _check_dims(phi: KrausChannel, split: BlockSplit):
    if (phi.source_dim, phi.target_dim) != (split.source_dim, split.target_dim):
        raise InvalidInput(
            f"channel is {phi.source_dim}->{phi.target_dim}, split expects "
            f"{split.source_dim}->{split.target_dim}")


def embed_operator(v, split: BlockSplit, block: int) -> np.ndarray:
    """Place a block operator ``H_s{block} -> H_t{block}`` into the full space."""
    v = nx.as_matrix(v)
    s, t = split.block_dims(block)
    if v.shape != (t, s):
        raise InvalidInput(f"block-{block} operator has shape {v.shape}, expected ({t}, {s})")
    out = np.zeros((split.target_dim, split.source_dim), dtype=np.complex128)
    out[split.target_slice(block), split.source_slice(block)] = v
    return out


def embed(phi: KrausChannel, split: BlockSplit, block: int) -> KrausChannel:
    """Inverse of compression: a block channel regarded as a map on the full space."""
    ops = tuple(embed_operator(v, split, block) for v in phi.kraus)
    return KrausChannel(split.source_dim, split.target_dim, ops)


def compress_operator(v, split: BlockSplit, block: int) -> np.ndarray:
    return np.asarray(v)[split.target_slice(block), split.source_slice(block)]


def allowed_mask(split: BlockSplit) -> np.ndarray:
    """Boolean over Choi indices ``t*S + s``: True when t and s lie in matching blocks."""
    tb = np.arange(split.target_dim) >= split.t1_dim
    sb = np.arange(split.source_dim) >= split.s1_dim
    return (tb[:, None] == sb[None, :]).reshape(-1)


def forbidden_weight(phi: KrausChannel, split: BlockSplit) -> float:
    _check_dims(phi, split)
    j = ch.choi(phi).matrix
    m = allowed_mask(split)
    keep = np.outer(m, m)
    return float(np.linalg.norm(np.where(keep, 0.0, j)))


def is_sp(phi: KrausChannel, split: BlockSplit, tol: float = nx.DEFAULT_TOL) -> bool:
    """True iff the Choi matrix has no weight outside the four allowed block pairs."""
    _check_dims(phi, split)
    trace = float(np.real(np.trace(ch.choi(phi).matrix)))
    return forbidden_weight(phi, split) <= max(tol * trace, nx.ABS_FLOOR)


def sp_blocks(phi: KrausChannel, split: BlockSplit, tol: float = nx.DEFAULT_TOL):
    """The two diagonal restrictions (s1 -> t1, s2 -> t2), compressed and canonicalized."""
    if not is_sp(phi, split, tol):
        raise NotSubspacePreserving("channel leaks between blocks")
    blocks = []
    for b in (1, 2):
        s, t = split.block_dims(b)
        ops = tuple(compress_operator(v, split, b) for v in phi.kraus)
        blocks.append(ch.li_kraus(KrausChannel(s, t, ops)))
    return blocks[0], blocks[1]


def default_basis(s_dim: int, t_dim: int) -> list:
    """Matrix units of L(H_s, H_t), ordered row-major by (target, source) index."""
    basis = []
    for t in range(t_dim):
        for s in range(s_dim):
            e = np.zeros((t_dim, s_dim), dtype=np.complex128)
            e[t, s] = 1.0
            basis.append(e)
    return basis


@dataclass(frozen=True, eq=False)
class SpTriple:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    basis_v: list = field(default_factory=list)
    basis_w: list = field(default_factory=list)

    @classmethod
    def with_default_bases(cls, a, b, c, split: BlockSplit) -> "SpTriple":
        return cls(nx.as_matrix(a), nx.as_matrix(b), nx.as_matrix(c),
                   default_basis(split.s1_dim, split.t1_dim),
                   default_basis(split.s2_dim, split.t2_dim))


@dataclass(frozen=True)
class SpDiagnostics:
    a_min_eig: float
    b_min_eig: float
    a_zero_leak: float
    b_zero_leak: float
    schur_min_eig: float
    tol: float
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations


def validate_sp_triple(triple: SpTriple, tol: float = nx.DEFAULT_TOL) -> SpDiagnostics:
    """Residual of every condition on (A, B, C); ``violations`` lists the failed ones."""
    a, b, c = (nx.as_matrix(m) for m in (triple.a, triple.b, triple.c))
    k, l = a.shape[0], b.shape[0]
    if a.shape != (k, k) or b.shape != (l, l) or c.shape != (k, l):
        raise InvalidInput(f"incompatible shapes A{a.shape} B{b.shape} C{c.shape}")
    a = 0.5 * (a + a.conj().T)
    b = 0.5 * (b + b.conj().T)
    scale = max(1.0, float(np.linalg.norm(a, 2)), float(np.linalg.norm(b, 2)))
    a_min = float(np.linalg.eigvalsh(a).min())
    b_min = float(np.linalg.eigvalsh(b).min())
    violations = []
    if a_min < -tol * scale:
        violations.append("A-not-PSD")
    if b_min < -tol * scale:
        violations.append("B-not-PSD")
    a_leak = b_leak = schur = float("nan")
    if not violations:
        pa = nx.zero_space_projector(a, tol)
        pb = nx.zero_space_projector(b, tol)
        a_leak = float(np.linalg.norm(pa @ c))
        b_leak = float(np.linalg.norm(c @ pb))
        if max(a_leak, b_leak) > tol * scale:
            violations.append("zero-space-leak")
        diff = a - c @ nx.pseudoinverse(b, tol) @ c.conj().T
        schur = float(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)).min())
        if schur < -tol * scale:
            violations.append("schur-violation")
    return SpDiagnostics(a_min, b_min, a_leak, b_leak, schur, tol, tuple(violations))


def _basis_vecs(triple: SpTriple, split: BlockSplit) -> np.ndarray:
    k, l = triple.a.shape[0], triple.b.shape[0]
    if len(triple.basis_v) != k or len(triple.basis_w) != l:
        raise InvalidInput("basis lengths must match the sizes of A and B")
    cols = [embed_operator(v, split, 1).reshape(-1) for v in triple.basis_v]
    cols += [embed_operator(w, split, 2).reshape(-1) for w in triple.basis_w]
    return np.column_stack(cols)


def build_sp(triple: SpTriple, split: BlockSplit, tol: float = nx.DEFAULT_TOL) -> KrausChannel:
    """Assemble ``sum A V Q V^+ + sum B W Q W^+ + sum C V Q W^+ + h.c.`` as a Kraus channel."""
    diag = validate_sp_triple(triple, tol)
    if not diag.passed:
        raise InvalidSpTriple(diag.violations[0])
    x = _basis_vecs(triple, split)
    g = np.block([[triple.a, triple.c], [triple.c.conj().T, triple.b]])
    j = x @ g @ x.conj().T
    return ch.from_choi(0.5 * (j + j.conj().T), split.source_dim, split.target_dim, tol)


def extract_sp_triple(phi: KrausChannel, split: BlockSplit, basis_v: Sequence = None,
                      basis_w: Sequence = None) -> SpTriple:
    """Coordinates (A, B, C) of an SP channel relative to the given block bases."""
    if not is_sp(phi, split):
        raise NotSubspacePreserving("channel leaks between blocks")
    if basis_v is None:
        basis_v = default_basis(split.s1_dim, split.t1_dim)
    if basis_w is None:
        basis_w = default_basis(split.s2_dim, split.t2_dim)
    k = len(basis_v)
    shell = SpTriple(np.zeros((k, k)), np.zeros((len(basis_w),) * 2), np.zeros((k, len(basis_w))),
                     list(basis_v), list(basis_w))
    x = _basis_vecs(shell, split)
    xp = np.linalg.pinv(x)
    g = xp @ ch.choi(phi).matrix @ xp.conj().T
    return SpTriple(g[:k, :k], g[k:, k:], g[:k, k:], list(basis_v), list(basis_w))
