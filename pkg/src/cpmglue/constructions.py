"""
Executable builders for concrete gluings: unitary families, collapse
channels, the swap mixture, ancilla attach/trace, ancilla-based
representations of SP channels, and the vacuum extension of a device.

Tensor products are always ordered system (x) ancilla.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channel as ch
from . import numerics as nx
from .channel import KrausChannel
from .errors import InvalidInput, UndefinedProbe
from .gluing import GluingMatrix, LspVectors, build_gluing, build_lsp
from .subspace import BlockSplit, compress_operator, embed_operator, is_sp


def _unit(v, name):
    v = nx.as_vector(v, name)
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise InvalidInput(f"{name} must be a unit vector")
    return v


def _direct_sum(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.complex128)
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


# -- superposition probes ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class SuperpositionProbe:
    psi1: np.ndarray
    psi2: np.ndarray
    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "psi1", _unit(self.psi1, "psi1"))
        object.__setattr__(self, "psi2", _unit(self.psi2, "psi2"))
        if abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0) > 1e-12:
            raise InvalidInput("|alpha|^2 + |beta|^2 must equal 1")

    def state(self) -> np.ndarray:
        return np.concatenate([self.alpha * self.psi1, self.beta * self.psi2])

    def density(self) -> np.ndarray:
        v = self.state()
        return np.outer(v, v.conj())


def coherence_metric(phi: KrausChannel, split: BlockSplit, probe: SuperpositionProbe) -> float:
    """Trace norm of the output's (t1, t2) block, relative to the input's ``|alpha||beta|``."""
    weight = abs(probe.alpha) * abs(probe.beta)
    if weight <= 1e-15:
        raise UndefinedProbe("probe has no superposition (alpha * beta = 0)")
    if (len(probe.psi1), len(probe.psi2)) != (split.s1_dim, split.s2_dim):
        raise InvalidInput("probe dimensions do not match the split")
    out = ch.apply(phi, probe.density())
    return nx.trace_norm(out[split.target_slice(1), split.target_slice(2)]) / weight


# -- unitary family and collapse channels -------------------------------------

def unitary_gluing(u1, u2, r: float, theta: float) -> KrausChannel:
    """``(1-r) U1.U1^+ + (1-r) U2.U2^+ + r (U1 + e^{-i theta} U2).(...)^+``, gluing scalar ``r e^{i theta}``."""
    u1, u2 = nx.as_matrix(u1, "u1"), nx.as_matrix(u2, "u2")
    if not (nx.is_unitary(u1) and nx.is_unitary(u2)):
        raise InvalidInput("u1 and u2 must be unitary")
    if not 0.0 <= r <= 1.0:
        raise InvalidInput(f"r must lie in [0, 1], got {r}")
    z1 = np.zeros_like(u1)
    z2 = np.zeros_like(u2)
    terms = [(1.0 - r, _direct_sum(u1, z2)), (1.0 - r, _direct_sum(z1, u2)),
             (r, _direct_sum(u1, np.exp(-1j * theta) * u2))]
    ops = [np.sqrt(w) * v for w, v in terms if w > 0]
    return KrausChannel.from_ops(ops)


def collapse_reps(psi1, psi2):
    """Linearly independent Kraus sets ``{|psi1><k|}``, ``{|psi2><l|}`` of the two collapse channels."""
    psi1, psi2 = _unit(psi1, "psi1"), _unit(psi2, "psi2")
    reps = []
    for psi in (psi1, psi2):
        d = len(psi)
        reps.append(KrausChannel(d, d, tuple(np.outer(psi, np.eye(d)[k]) for k in range(d))))
    return reps[0], reps[1]


def collapse_lsp_vectors(psi1, psi2) -> LspVectors:
    """c-vectors giving ``V = |psi1><psi1|`` and ``W = |psi2><psi2|`` in the collapse reps."""
    return LspVectors(np.conj(_unit(psi1, "psi1")), np.conj(_unit(psi2, "psi2")))


def collapse_gluing(psi1, psi2, c) -> KrausChannel:
    """Gluing of the two collapse channels.

    ``c`` is a gluing matrix over the computational bases of the two blocks,
    a :class:`GluingMatrix` built on :func:`collapse_reps`, an
    :class:`LspVectors`, or the string ``"delta"`` for ``C_kl = delta_kl``.
    """
    rep1, rep2 = collapse_reps(psi1, psi2)
    d1, d2 = rep1.source_dim, rep2.source_dim
    if isinstance(c, str):
        if c != "delta":
            raise InvalidInput(f"unknown gluing matrix keyword {c!r}")
        if d1 != d2:
            raise InvalidInput("delta gluing needs dim H_s1 = dim H_s2")
        c = np.eye(d1)
    elif isinstance(c, LspVectors):
        c = c.matrix()
    elif isinstance(c, GluingMatrix):
        c = c.c
    c = nx.as_matrix(c, "gluing matrix")
    if c.shape != (d1, d2):
        raise InvalidInput(f"gluing matrix has shape {c.shape}, expected ({d1}, {d2})")
    return build_gluing(rep1, rep2, GluingMatrix(c, rep1, rep2), BlockSplit.square(d1, d2))


# -- swap mixture ---------------------------------------------------------------

def swap_mixture_reps(v_s1, v_s2):
    """The Kraus sets ``{V_s1/sqrt2, P_s1/sqrt2}`` and ``{V_s2/sqrt2, P_s2/sqrt2}`` of the blocks."""
    reps = []
    for name, v in (("v_s1", v_s1), ("v_s2", v_s2)):
        v = nx.as_matrix(v, name)
        if not nx.is_unitary(v):
            raise InvalidInput(f"{name} must be unitary on its block")
        ident = np.eye(v.shape[0])
        x = np.column_stack([v.reshape(-1), ident.reshape(-1)])
        if np.linalg.svd(x, compute_uv=False)[-1] <= 1e-9:
            raise InvalidInput(f"{{{name}, P}} is linearly dependent")
        reps.append(KrausChannel.from_ops([v / np.sqrt(2), ident / np.sqrt(2)]))
    return reps[0], reps[1]


def swap_mixture(v_s1, v_s2) -> KrausChannel:
    """Equal mixture of ``V_s1 + P_s2`` and ``P_s1 + V_s2`` (SP but not LSP)."""
    swap_mixture_reps(v_s1, v_s2)
    v1, v2 = nx.as_matrix(v_s1), nx.as_matrix(v_s2)
    ua = _direct_sum(v1, np.eye(v2.shape[0]))
    ub = _direct_sum(np.eye(v1.shape[0]), v2)
    return KrausChannel.from_ops([ua / np.sqrt(2), ub / np.sqrt(2)])


# -- ancilla attach / partial trace -------------------------------------------

def _density(sigma) -> np.ndarray:
    sigma = nx.as_matrix(sigma, "sigma")
    if sigma.shape[0] != sigma.shape[1] or not nx.is_hermitian(sigma):
        raise InvalidInput("sigma must be a Hermitian square matrix")
    if abs(np.trace(sigma) - 1.0) > 1e-10:
        raise InvalidInput("sigma must have unit trace")
    if np.linalg.eigvalsh(0.5 * (sigma + sigma.conj().T)).min() < -1e-10:
        raise InvalidInput("sigma must be positive semidefinite")
    return sigma


def attached_split(split: BlockSplit, ancilla_dim: int) -> BlockSplit:
    """Split for ``Q -> Q (x) sigma``: (s1, s2) -> (s1 (x) a, s2 (x) a)."""
    return BlockSplit(split.s1_dim, split.s2_dim, split.s1_dim * ancilla_dim, split.s2_dim * ancilla_dim)


def traced_split(split: BlockSplit, ancilla_dim: int) -> BlockSplit:
    """Split for the partial trace: (s1 (x) a, s2 (x) a) -> (s1, s2)."""
    return BlockSplit(split.s1_dim * ancilla_dim, split.s2_dim * ancilla_dim, split.s1_dim, split.s2_dim)


def _sigma_factors(sigma):
    eig = nx.hermitian_eigen(sigma)
    keep = eig.values > nx.cutoff(float(eig.values[0]))
    return [np.sqrt(lam) * eig.vectors[:, k] for k, lam in enumerate(eig.values) if keep[k]]


def attach_ancilla(sigma, split: BlockSplit) -> KrausChannel:
    """``Q -> Q (x) sigma`` on the source space of ``split``."""
    sigma = _density(sigma)
    s = split.source_dim
    ops = [np.kron(np.eye(s), f[:, None]) for f in _sigma_factors(sigma)]
    return KrausChannel.from_ops(ops)


def ancilla_reps(sigma, split: BlockSplit):
    """Block Kraus sets ``{sqrt(l_k) P_s1 (x) |l_k>}`` and the s2 analogue (compressed)."""
    sigma = _density(sigma)
    reps = []
    for d in (split.s1_dim, split.s2_dim):
        reps.append(KrausChannel.from_ops([np.kron(np.eye(d), f[:, None]) for f in _sigma_factors(sigma)]))
    return reps[0], reps[1]


def partial_trace_channel(split: BlockSplit, ancilla_dim: int) -> KrausChannel:
    """``Tr_a`` from (H_s1 (+) H_s2) (x) H_a to H_s1 (+) H_s2."""
    if ancilla_dim < 1:
        raise InvalidInput("ancilla_dim must be >= 1")
    s = split.source_dim
    basis = np.eye(ancilla_dim)
    return KrausChannel.from_ops([np.kron(np.eye(s), basis[k][None, :]) for k in range(ancilla_dim)])


def partial_trace_reps(split: BlockSplit, ancilla_dim: int):
    basis = np.eye(ancilla_dim)
    reps = []
    for d in (split.s1_dim, split.s2_dim):
        reps.append(KrausChannel.from_ops([np.kron(np.eye(d), basis[k][None, :]) for k in range(ancilla_dim)]))
    return reps[0], reps[1]


def partial_trace(rho, system_dim: int, ancilla_dim: int) -> np.ndarray:
    rho = nx.as_matrix(rho).reshape(system_dim, ancilla_dim, system_dim, ancilla_dim)
    return np.einsum("iaja->ij", rho)


# -- ancilla representations of SP channels -----------------------------------

def _require_sp_tp(phi: KrausChannel, split: BlockSplit):
    if not ch.is_tp(phi):
        raise InvalidInput("channel must be trace preserving")
    if not is_sp(phi, split):
        raise InvalidInput("channel must be subspace preserving on the split")


def _block_parts(phi: KrausChannel, split: BlockSplit, ancilla_dim: int = None):
    """``V1 = sum_k V_{1,k} (x) |a_k>`` and ``V2`` likewise, from the LI Kraus set of phi.

    Both are returned as full-space operators ``S -> T (x) a``; extra ancilla
    dimensions beyond the Kraus number are left unused.
    """
    ops = ch.li_kraus(phi).kraus
    k = len(ops) if ancilla_dim is None else ancilla_dim
    if k < len(ops):
        raise InvalidInput(f"ancilla needs at least {len(ops)} dimensions, got {k}")
    basis = np.eye(k)
    v1 = np.zeros((split.target_dim * k, split.source_dim), dtype=np.complex128)
    v2 = np.zeros_like(v1)
    for idx, v in enumerate(ops):
        for b, acc in ((1, v1), (2, v2)):
            part = embed_operator(compress_operator(v, split, b), split, b)
            acc += np.kron(part, basis[idx][:, None])
    return k, v1, v2


def sprep1(phi: KrausChannel, split: BlockSplit):
    """Single-Kraus channel ``Psi = {V1 + V2}`` into ``T (x) a`` with ``Tr_a Psi = phi``.

    Returns ``(ancilla_dim, Psi)``; Psi is SP on ``split.with_ancilla(1, ancilla_dim)``.
    """
    _require_sp_tp(phi, split)
    k, v1, v2 = _block_parts(phi, split)
    return k, KrausChannel.from_ops([v1 + v2])


def sprep2_reps(phi: KrausChannel, split: BlockSplit, ancilla_dim: int):
    """Block Kraus sets ``{V1 <a_l|}``, ``{V2 <a_l|}`` and the ancilla-extended split."""
    k, v1, v2 = _block_parts(phi, split, ancilla_dim)
    ext = split.with_ancilla(k, k)
    basis = np.eye(k)
    reps = []
    for b, v in ((1, v1), (2, v2)):
        ops = [v @ np.kron(np.eye(split.source_dim), basis[l][None, :]) for l in range(k)]
        reps.append(KrausChannel.from_ops([compress_operator(x, ext, b) for x in ops]))
    return reps[0], reps[1], ext


def sprep2(phi: KrausChannel, split: BlockSplit, a) -> KrausChannel:
    """LSP gluing ``Psi'`` on ``T (x) a`` with ``Tr_a Psi'(Q (x) |a><a|) = phi(Q)``.

    The ancilla dimension is ``len(a)``, which must be at least the Kraus
    number of phi.
    """
    _require_sp_tp(phi, split)
    a = _unit(a, "a")
    rep1, rep2, ext = sprep2_reps(phi, split, len(a))
    # <a| = sum_k conj(a_k) <a_k|
    vecs = LspVectors(np.conj(a), np.conj(a))
    return build_lsp(rep1, rep2, vecs, ext, rep1=rep1, rep2=rep2)


# -- device pairs and vacuum extension ----------------------------------------

@dataclass(frozen=True, eq=False)
class DevicePair:
    """A TP channel on H_1 plus the coefficients of ``V = sum c_k V_k`` over its Kraus list.

    The Kraus list of ``channel`` is the reference representation and must be
    linearly independent.
    """

    channel: KrausChannel
    v_coeffs: np.ndarray

    def __post_init__(self):
        if self.channel.source_dim != self.channel.target_dim:
            raise InvalidInput("device channel must map H_1 to itself")
        if not ch.is_tp(self.channel):
            raise InvalidInput("device channel must be trace preserving")
        if not ch.is_linearly_independent(self.channel.kraus):
            raise InvalidInput("device channel Kraus list must be linearly independent")
        c = nx.as_vector(self.v_coeffs, "v_coeffs")
        if len(c) != len(self.channel):
            raise InvalidInput("one coefficient per Kraus operator is required")
        if float(np.vdot(c, c).real) > 1.0 + 1e-9:
            raise InvalidInput("sum |c_k|^2 must not exceed 1")
        object.__setattr__(self, "v_coeffs", c)

    def v_operator(self) -> np.ndarray:
        return sum(c * v for c, v in zip(self.v_coeffs, self.channel.kraus))


def vacuum_extend(pair: DevicePair) -> KrausChannel:
    """The device channel on ``H_1 (+) span{|0>}`` (vacuum last) fixed by the pair."""
    d = pair.channel.source_dim
    vac = ch.identity_channel(1)
    g = GluingMatrix(pair.v_coeffs[:, None], pair.channel, vac)
    return build_gluing(pair.channel, vac, g, BlockSplit.square(d, 1))


def pair_to_lsp(p1: DevicePair, p2: DevicePair, split: BlockSplit) -> KrausChannel:
    """The unique LSP gluing determined by two device pairs."""
    return build_lsp(p1.channel, p2.channel, LspVectors(p1.v_coeffs, p2.v_coeffs), split,
                     rep1=p1.channel, rep2=p2.channel)
