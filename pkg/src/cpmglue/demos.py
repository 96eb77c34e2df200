"""
Worked examples with checked claims.

Each demo returns a list of :class:`Claim`; the CLI prints them and exits
non-zero if any fails. Parameters are fixed (seeded where random) so the
output is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channel as ch
from . import constructions as cs
from . import numerics as nx
from . import rand
from .gluing import analyze, extract_gluing_matrix
from .subspace import BlockSplit, is_sp

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class Claim:
    text: str
    passed: bool
    residual: float = 0.0


def _close(text, value, target, tol):
    r = float(np.max(np.abs(np.asarray(value) - np.asarray(target))))
    return Claim(text, r <= tol, r)


def _flag(text, ok):
    return Claim(text, bool(ok))


def _within(value, tol):
    return value <= tol, value


def unitary_family(tol=nx.DEFAULT_TOL, rs=(0.0, 0.25, 0.5, 0.75, 1.0)):
    rng = np.random.default_rng(11)
    u1, u2 = rand.unitary(rng, 2), rand.unitary(rng, 2)
    split = BlockSplit.square(2, 2)
    probe = cs.SuperpositionProbe(rand.unit_vector(rng, 2), rand.unit_vector(rng, 2),
                                  np.sqrt(0.3), np.sqrt(0.7) * np.exp(0.4j))
    claims = []
    table = []
    for r in rs:
        phi = cs.unitary_gluing(u1, u2, r, 0.9)
        m = cs.coherence_metric(phi, split, probe)
        table.append((r, m))
        claims.append(_close(f"coherence(r={r:g}) = r", m, r, 1e-10))
    metrics = [m for _, m in table]
    claims.append(_flag("coherence sweep monotone", all(b >= a - 1e-12 for a, b in zip(metrics, metrics[1:]))))
    one = cs.unitary_gluing(u1, u2, 1.0, 0.9)
    out = ch.apply(one, probe.density())
    claims.append(_close("r=1 output is pure", np.real(np.trace(out @ out)), 1.0, 1e-10))
    claims.append(_close("r=1 block weights preserved",
                         [np.real(np.trace(out[:2, :2])), np.real(np.trace(out[2:, 2:]))],
                         [abs(probe.alpha) ** 2, abs(probe.beta) ** 2], 1e-12))
    zero = cs.unitary_gluing(u1, u2, 0.0, 0.9)
    a1, a2 = u1 @ probe.psi1, u2 @ probe.psi2
    expected = np.zeros((4, 4), dtype=complex)
    expected[:2, :2] = abs(probe.alpha) ** 2 * np.outer(a1, a1.conj())
    expected[2:, 2:] = abs(probe.beta) ** 2 * np.outer(a2, a2.conj())
    claims.append(_close("r=0 output is the block mixture", ch.apply(zero, probe.density()), expected, 1e-12))
    claims.append(_flag("every member is TP", all(ch.classify(cs.unitary_gluing(u1, u2, r, 0.9)).is_tp for r in rs)))
    return claims, table


def collapse(tol=nx.DEFAULT_TOL):
    rng = np.random.default_rng(12)
    psi1, psi2 = rand.unit_vector(rng, 2), rand.unit_vector(rng, 2)
    phi = cs.collapse_gluing(psi1, psi2, cs.collapse_lsp_vectors(psi1, psi2))
    alpha, beta = 0.6, 0.8j
    v = np.concatenate([alpha * psi1, beta * psi2])
    rho = np.outer(v, v.conj())
    claims = [_close("a psi1 + b psi2 is a fixed point", ch.apply(phi, rho), rho, 1e-12)]
    perp1 = np.array([-np.conj(psi1[1]), np.conj(psi1[0])])
    perp2 = np.array([-np.conj(psi2[1]), np.conj(psi2[0])])
    w = np.concatenate([alpha * perp1, beta * perp2])
    mixed = np.zeros((4, 4), dtype=complex)
    mixed[:2, :2] = abs(alpha) ** 2 * np.outer(psi1, psi1.conj())
    mixed[2:, 2:] = abs(beta) ** 2 * np.outer(psi2, psi2.conj())
    claims.append(_close("orthogonal superposition is destroyed", ch.apply(phi, np.outer(w, w.conj())), mixed, 1e-12))
    delta = cs.collapse_gluing(psi1, psi2, "delta")
    target = np.concatenate([alpha * psi1, beta * psi2])
    worst = 0.0
    for k in range(2):
        x = np.zeros(4, dtype=complex)
        x[k], x[2 + k] = alpha, beta
        out = ch.apply(delta, np.outer(x, x.conj()))
        worst = max(worst, float(np.max(np.abs(out - np.outer(target, target.conj())))))
    claims.append(Claim("delta gluing maps a|s1_k> + b|s2_k> to a psi1 + b psi2", worst <= 1e-12, worst))
    return claims, None


def swap_mixture(tol=nx.DEFAULT_TOL):
    split = BlockSplit.square(2, 2)
    phi = cs.swap_mixture(PAULI_X, PAULI_X)
    rep1, rep2 = cs.swap_mixture_reps(PAULI_X, PAULI_X)
    g = extract_gluing_matrix(phi, rep1, rep2, split, rep1=rep1, rep2=rep2)
    info = analyze(g, tol)
    k = ch.classify(phi, tol).kraus_number
    claims = [
        _flag("SP: yes", is_sp(phi, split, tol)),
        _flag("LSP: no", not info.is_lsp),
        _close("C=[[0,1],[1,0]]", g.c, PAULI_X, 1e-10),
        _flag("K=2", k == 2),
        _close("singulars 1,1", info.singulars, [1.0, 1.0], 1e-10),
    ]
    return claims, g


def ancilla(tol=nx.DEFAULT_TOL):
    split = BlockSplit.square(1, 2)
    claims = []
    for label, sigma, expect in (("pure sigma", np.diag([1.0, 0.0]), True),
                                 ("mixed sigma", np.diag([0.5, 0.5]), False)):
        lam = cs.attach_ancilla(sigma, split)
        ext = cs.attached_split(split, 2)
        r1, r2 = cs.ancilla_reps(sigma, split)
        g = extract_gluing_matrix(lam, r1, r2, ext, rep1=r1, rep2=r2)
        claims.append(_flag(f"{label}: SP", is_sp(lam, ext, tol)))
        claims.append(_close(f"{label}: C = I_K", g.c, np.eye(len(r1)), 1e-10))
        claims.append(_flag(f"{label}: LSP {'yes' if expect else 'no'}", analyze(g, tol).is_lsp == expect))
    for d in (1, 2, 3):
        tr = cs.partial_trace_channel(split, d)
        r1, r2 = cs.partial_trace_reps(split, d)
        g = extract_gluing_matrix(tr, r1, r2, cs.traced_split(split, d), rep1=r1, rep2=r2)
        claims.append(_flag(f"partial trace dim_a={d}: LSP {'yes' if d == 1 else 'no'}",
                            analyze(g, tol).is_lsp == (d == 1)))
    return claims, None


def sprep(tol=nx.DEFAULT_TOL):
    split = BlockSplit.square(2, 2)
    phi = cs.swap_mixture(PAULI_X, PAULI_X)
    k, psi = cs.sprep1(phi, split)
    trace_out = cs.partial_trace_channel(split, k)
    claims = [
        _flag("Psi has a single Kraus operator", len(psi) == 1),
        Claim("Tr_a Psi = Phi", *_within(ch.distance(ch.compose(trace_out, psi), phi), 1e-9)),
        _flag("Psi is TP", ch.classify(psi, tol).is_tp),
    ]
    a = np.array([1.0, 0.0])
    psi2 = cs.sprep2(phi, split, a)
    ancilla_state = ch.KrausChannel.from_ops([np.kron(np.eye(4), a[:, None])])
    recon = ch.compose(cs.partial_trace_channel(split, len(a)), ch.compose(psi2, ancilla_state))
    rep1, rep2, ext = cs.sprep2_reps(phi, split, len(a))
    g = extract_gluing_matrix(psi2, rep1, rep2, ext, rep1=rep1, rep2=rep2)
    claims.append(Claim("Tr_a Psi'(Q (x) |a><a|) = Phi", *_within(ch.distance(recon, phi), 1e-9)))
    claims.append(_flag("Psi' is LSP", analyze(g, tol).is_lsp))
    return claims, None


def vacuum(tol=nx.DEFAULT_TOL):
    rng = np.random.default_rng(13)
    dev = rand.tp_channel(rng, 2, 2, 2)
    c = rand.unit_vector(rng, 2) * 0.8
    pair = cs.DevicePair(dev, c)
    ext = cs.vacuum_extend(pair)
    split = BlockSplit.square(2, 1)
    vac = np.zeros((3, 3))
    vac[2, 2] = 1.0
    claims = [
        _flag("extension is TP", ch.classify(ext, tol).is_tp),
        _close("vacuum maps to vacuum", ch.apply(ext, vac), vac, 1e-12),
        Claim("restriction to H_1 is the device channel",
              *_within(ch.distance(ch.li_kraus(ch.KrausChannel.from_ops(
                  [v[:2, :2] for v in ext.kraus])), dev), 1e-10)),
    ]
    g = extract_gluing_matrix(ext, dev, ch.identity_channel(1), split, rep1=dev, rep2=ch.identity_channel(1))
    claims.append(_close("gluing matrix equals the V coefficients", g.c[:, 0], c, 1e-10))
    claims.append(_flag("gluing with a K=1 channel is LSP", analyze(g, tol).is_lsp))
    return claims, None


DEMOS = {
    "unitary-family": unitary_family,
    "collapse": collapse,
    "swap-mixture": swap_mixture,
    "ancilla": ancilla,
    "sprep": sprep,
    "vacuum": vacuum,
}
