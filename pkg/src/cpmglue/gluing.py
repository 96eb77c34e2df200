"""
SP and LSP gluings of two CPMs through the gluing matrix C.

Given linearly independent Kraus sets {V_n} of phi1 and {W_m} of phi2, every
SP gluing is

    phi(Q) = sum_n V_n Q V_n^+ + sum_m W_m Q W_m^+
             + sum_nm C_nm V_n Q W_m^+ + h.c.,

with ``sigma_max(C) <= 1``. The matrix C is only meaningful relative to the
two Kraus sets, so :class:`GluingMatrix` carries them along.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channel as ch
from . import numerics as nx
from .channel import KrausChannel
from .errors import (InvalidGluingMatrix, InvalidInput, InvalidLspVectors, NotAGluingOfThese,
                     NotARepresentation, NotInGluingFamily, NotLsp, NotSubspacePreserving,
                     ZeroMatrix)
from .subspace import BlockSplit, embed_operator, is_sp, sp_blocks

ONE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GluingMatrix:
    c: np.ndarray
    rep1: KrausChannel
    rep2: KrausChannel

    def __post_init__(self):
        c = nx.as_matrix(self.c, name="gluing matrix")
        if c.shape != (len(self.rep1), len(self.rep2)):
            raise InvalidInput(
                f"gluing matrix has shape {c.shape}, reps have lengths "
                f"({len(self.rep1)}, {len(self.rep2)})")
        for name, rep in (("rep1", self.rep1), ("rep2", self.rep2)):
            if not ch.is_linearly_independent(rep.kraus):
                raise InvalidInput(f"{name} is not a linearly independent Kraus set")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def canonical(cls, c, phi1: KrausChannel, phi2: KrausChannel) -> "GluingMatrix":
        """C relative to the canonical (``li_kraus``) representations of phi1, phi2."""
        return cls(c, ch.li_kraus(phi1), ch.li_kraus(phi2))

    @property
    def shape(self):
        return self.c.shape

    def with_c(self, c) -> "GluingMatrix":
        return GluingMatrix(c, self.rep1, self.rep2)


@dataclass(frozen=True, eq=False)
class LspVectors:
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c1", nx.as_vector(self.c1, "c1"))
        object.__setattr__(self, "c2", nx.as_vector(self.c2, "c2"))

    def matrix(self) -> np.ndarray:
        return np.outer(self.c1, self.c2.conj())


@dataclass(frozen=True)
class GluingAnalysis:
    singulars: tuple
    predicted_kraus_number: int
    is_valid: bool
    is_extreme: bool
    is_lsp: bool
    ones_count: int


def _singulars(c) -> np.ndarray:
    return np.linalg.svd(nx.as_matrix(c), compute_uv=False)


def contraction_checks(c, tol: float = ONE_TOL) -> tuple:
    """Three independent tests of ``I_N >= C C^+``, ``I_M >= C^+ C`` and ``sigma_max <= 1``."""
    c = nx.as_matrix(c)
    n, m = c.shape
    left = np.linalg.eigvalsh(np.eye(n) - c @ c.conj().T).min() >= -tol
    right = np.linalg.eigvalsh(np.eye(m) - c.conj().T @ c).min() >= -tol
    smax = float(np.linalg.norm(c, 2)) <= 1.0 + tol
    return bool(left), bool(right), bool(smax)


def analyze(g, tol: float = ONE_TOL) -> GluingAnalysis:
    c = g.c if isinstance(g, GluingMatrix) else nx.as_matrix(g)
    n, m = c.shape
    s = nx.svd(c).singulars
    ones = int(np.sum(np.abs(s - 1.0) <= tol))
    return GluingAnalysis(
        singulars=tuple(float(x) for x in s),
        predicted_kraus_number=n + m - ones,
        is_valid=bool(s[0] <= 1.0 + tol),
        is_extreme=ones == min(n, m),
        is_lsp=int(np.sum(s > tol)) <= 1,
        ones_count=ones,
    )


def _same_map(a: KrausChannel, b: KrausChannel, tol: float = 1e-9) -> float:
    """Choi distance if dims agree, else inf."""
    if (a.source_dim, a.target_dim) != (b.source_dim, b.target_dim):
        return float("inf")
    return ch.distance(a, b)


def _check_reps(phi1, phi2, g: GluingMatrix, split: BlockSplit):
    for b, phi, rep in ((1, phi1, g.rep1), (2, phi2, g.rep2)):
        s, t = split.block_dims(b)
        if (phi.source_dim, phi.target_dim) != (s, t):
            raise InvalidInput(f"phi{b} is {phi.source_dim}->{phi.target_dim}, split block is {s}->{t}")
        d = _same_map(phi, rep)
        if d > 1e-9 * max(1.0, float(np.linalg.norm(ch.choi(phi).matrix))):
            raise NotARepresentation(f"rep{b} does not represent phi{b} (Choi distance {d:.3e})")


def _stacked(g: GluingMatrix, split: BlockSplit) -> np.ndarray:
    cols = [embed_operator(v, split, 1).reshape(-1) for v in g.rep1.kraus]
    cols += [embed_operator(w, split, 2).reshape(-1) for w in g.rep2.kraus]
    return np.column_stack(cols)


def _coefficients(c: np.ndarray) -> np.ndarray:
    n, m = c.shape
    return np.block([[np.eye(n), c], [c.conj().T, np.eye(m)]])


def gluing_choi(g: GluingMatrix, split: BlockSplit) -> np.ndarray:
    """Choi matrix of the gluing; linear in C."""
    x = _stacked(g, split)
    return x @ _coefficients(g.c) @ x.conj().T


def build_gluing(phi1: KrausChannel, phi2: KrausChannel, g: GluingMatrix,
                 split: BlockSplit) -> KrausChannel:
    """The SP gluing of phi1, phi2 with gluing matrix ``g``, on the full space."""
    _check_reps(phi1, phi2, g, split)
    smax = float(_singulars(g.c)[0])
    if smax > 1.0 + ONE_TOL:
        raise InvalidGluingMatrix(smax)
    j = gluing_choi(g, split)
    return ch.from_choi(0.5 * (j + j.conj().T), split.source_dim, split.target_dim)


def extract_gluing_matrix(phi: KrausChannel, phi1: KrausChannel, phi2: KrausChannel,
                          split: BlockSplit, rep1: KrausChannel = None,
                          rep2: KrausChannel = None) -> GluingMatrix:
    """Recover C from an SP gluing, relative to ``rep1``/``rep2`` (canonical if omitted).

    The Choi matrix is projected onto the span of the stacked block Kraus
    vectors by least squares; the off-diagonal block of the coefficient
    matrix is C.
    """
    if not is_sp(phi, split):
        raise NotSubspacePreserving("channel leaks between blocks")
    b1, b2 = sp_blocks(phi, split)
    scale = max(1.0, float(np.real(np.trace(ch.choi(phi).matrix))))
    mismatch = max(_same_map(b1, phi1), _same_map(b2, phi2))
    if mismatch > 1e-9 * scale:
        raise NotAGluingOfThese(mismatch)
    rep1 = ch.li_kraus(phi1) if rep1 is None else rep1
    rep2 = ch.li_kraus(phi2) if rep2 is None else rep2
    n, m = len(rep1), len(rep2)
    shell = GluingMatrix(np.zeros((n, m)), rep1, rep2)
    _check_reps(phi1, phi2, shell, split)

    x = _stacked(shell, split)
    j = ch.choi(phi).matrix
    xp = np.linalg.pinv(x)
    coeffs = xp @ j @ xp.conj().T
    c = coeffs[:n, n:]
    residual = float(np.linalg.norm(j - x @ _coefficients(c) @ x.conj().T))
    if residual > 1e-9 * scale:
        raise NotInGluingFamily(residual)
    return shell.with_c(c)


def extreme_decompose(g, drop: float = 1e-14):
    """Convex decomposition of a valid gluing matrix into extreme points.

    Returns ``[(weight, D), ...]`` with ``D D^+ = I`` on the smaller side.
    Follows the singular-value ladder: with ascending singular values
    r_1 <= ... <= r_N, weights lambda_0 = r_1, lambda_n = r_{n+1} - r_n,
    lambda_N = 1 - r_N on the midpoints H_n = (D_0 + D_n)/2, each midpoint
    then split evenly onto its two extreme endpoints. Terms with weight
    below ``drop`` are omitted.
    """
    c = g.c if isinstance(g, GluingMatrix) else nx.as_matrix(g)
    res = nx.svd(c)
    if res.singulars[0] > 1.0 + ONE_TOL:
        raise InvalidGluingMatrix(float(res.singulars[0]))
    flipped = c.shape[0] > c.shape[1]
    if flipped:
        res = nx.svd(c.conj().T)
    # ascending order; left columns are c_k, rows of right_adj are d_k^+
    r = np.clip(res.singulars[::-1], 0.0, 1.0)
    cols = res.left[:, ::-1]
    rows = res.right_adj[::-1, :]
    n = len(r)
    terms = [np.outer(cols[:, k], rows[k, :]) for k in range(n)]

    lam = np.empty(n + 1)
    lam[0] = r[0]
    lam[1:n] = np.diff(r)
    lam[n] = 1.0 - r[-1]

    d0 = sum(terms)
    out = [(lam[0] + 0.5 * lam[1:].sum(), d0)]
    for k in range(1, n + 1):
        dk = -sum(terms[:k]) + sum(terms[k:], np.zeros_like(d0))
        out.append((0.5 * lam[k], dk))
    out = [(float(w), d) for w, d in out if w > drop]
    if flipped:
        out = [(w, d.conj().T) for w, d in out]
    return out


def build_lsp(phi1: KrausChannel, phi2: KrausChannel, v: LspVectors, split: BlockSplit,
              rep1: KrausChannel = None, rep2: KrausChannel = None) -> KrausChannel:
    """LSP gluing ``... + V Q W^+ + W Q V^+`` with ``V = sum c1_n V_n``, ``W = sum c2_m W_m``."""
    for name, phi in (("phi1", phi1), ("phi2", phi2)):
        if not ch.is_tp(phi):
            raise InvalidInput(f"{name} must be trace preserving")
    for name, vec in (("c1", v.c1), ("c2", v.c2)):
        norm = float(np.linalg.norm(vec))
        if norm > 1.0 + ONE_TOL:
            raise InvalidLspVectors(f"||{name}|| = {norm:.12g} exceeds 1")
    rep1 = ch.li_kraus(phi1) if rep1 is None else rep1
    rep2 = ch.li_kraus(phi2) if rep2 is None else rep2
    if (len(v.c1), len(v.c2)) != (len(rep1), len(rep2)):
        raise InvalidLspVectors(
            f"vector lengths ({len(v.c1)}, {len(v.c2)}) do not match Kraus numbers "
            f"({len(rep1)}, {len(rep2)})")
    return build_gluing(phi1, phi2, GluingMatrix(v.matrix(), rep1, rep2), split)


def lsp_factor(g, tol: float = ONE_TOL) -> LspVectors:
    """Balanced rank-1 factorization ``C = c1 c2^+`` with ``||c1|| = ||c2||``.

    The common phase is fixed by making the first non-zero entry of c1 real
    and positive.
    """
    c = g.c if isinstance(g, GluingMatrix) else nx.as_matrix(g)
    res = nx.svd(c)
    s = res.singulars
    if int(np.sum(s > tol)) > 1:
        raise NotLsp(f"gluing matrix has {int(np.sum(s > tol))} non-zero singular values")
    if s[0] <= tol:
        raise ZeroMatrix("C = 0; use zero vectors")
    root = np.sqrt(s[0])
    c1 = root * res.left[:, 0]
    c2 = root * res.right_adj[0, :].conj()
    first = int(np.flatnonzero(np.abs(c1) > tol * root)[0])
    phase = np.conj(c1[first]) / abs(c1[first])
    c1, c2 = c1 * phase, c2 * phase
    c1[first] = abs(c1[first])
    return LspVectors(c1, c2)
