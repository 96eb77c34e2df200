import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpmglue import channel as ch
from cpmglue import constructions as cs
from cpmglue import io, rand
from cpmglue.cli import main
from cpmglue.demos import DEMOS
from cpmglue.gluing import GluingMatrix, build_gluing
from cpmglue.subspace import BlockSplit

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def write(tmp_path, name, obj):
    p = tmp_path / name
    io.dump(obj, p)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- serialization ------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_channel_round_trip_bit_exact(s, t, k, seed):
    rng = np.random.default_rng(seed)
    phi = rand.cp_channel(rng, s, t, k)
    back = io.channel_from_json(io.loads(io.dumps(io.channel_to_json(phi))))
    assert (back.source_dim, back.target_dim) == (s, t)
    for a, b in zip(phi.kraus, back.kraus):
        assert a.tobytes() == b.tobytes()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e300),
                min_size=1, max_size=12))
def test_matrix_round_trip_bit_exact(values):
    m = np.array(values, dtype=np.complex128).reshape(1, -1)
    back = io.matrix_from_json(io.loads(io.dumps(io.matrix_to_json(m))))
    assert back.tobytes() == m.tobytes()


def test_gluing_and_split_round_trip(rng):
    phi1 = ch.li_kraus(rand.tp_channel(rng, 2, 2, 2))
    g = GluingMatrix(rand.contraction(rng, 2, 1), phi1, ch.identity_channel(1))
    back = io.gluing_from_json(io.loads(io.dumps(io.gluing_to_json(g))))
    assert back.c.tobytes() == g.c.tobytes()
    split = BlockSplit(1, 2, 3, 4)
    assert io.split_from_json(io.split_to_json(split)) == split


def test_schema_errors_name_the_field():
    good = io.channel_to_json(ch.identity_channel(2))
    bad = json.loads(json.dumps(good))
    bad["kraus"][0][1][0] = [1.0]
    with pytest.raises(io.SchemaError) as info:
        io.channel_from_json(bad)
    assert info.value.path == "kraus[0][1][0]"
    bad = json.loads(json.dumps(good))
    bad["kraus"][0] = [[[1, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]]]
    with pytest.raises(io.SchemaError) as info:
        io.channel_from_json(bad)
    assert info.value.path == "kraus[0]"
    with pytest.raises(io.SchemaError) as info:
        io.split_from_json({"s1_dim": 1, "s2_dim": 0, "t1_dim": 1, "t2_dim": 1})
    assert info.value.path == "s2_dim"


def test_nan_and_infinity_rejected():
    for text in ('[[NaN, 0]]', '[[Infinity, 0]]', '[[1e999, 0]]'):
        with pytest.raises(io.SchemaError):
            io.vector_from_json(io.loads(text))
    with pytest.raises(ValueError):
        io.dumps(io.vector_to_json([complex(np.nan, 0)]))


# -- validate ----------------------------------------------------------------

def test_validate_identity(tmp_path, capsys):
    path = write(tmp_path, "id.json", io.channel_to_json(ch.identity_channel(2), name="identity"))
    code, out, _ = run(capsys, "validate", path)
    assert code == 0
    assert out.splitlines()[0] == "CP yes, TP yes, K=1"


def test_validate_swap_mixture_with_split(tmp_path, capsys):
    phi = write(tmp_path, "swap.json", io.channel_to_json(cs.swap_mixture(PAULI_X, PAULI_X)))
    split = write(tmp_path, "split.json", io.split_to_json(BlockSplit.square(2, 2)))
    code, out, _ = run(capsys, "validate", phi, "--split", split)
    assert code == 0
    assert "SP yes, LSP no, singulars 1,1" in out


def test_validate_leaky_channel_reports_not_sp(tmp_path, capsys):
    v = np.zeros((2, 2))
    v[1, 0] = v[0, 1] = 1.0
    phi = write(tmp_path, "x.json", io.channel_to_json(ch.KrausChannel.from_ops([v])))
    split = write(tmp_path, "split.json", io.split_to_json(BlockSplit.square(1, 1)))
    code, out, _ = run(capsys, "validate", phi, "--split", split)
    assert code == 0 and "SP no" in out


def test_validate_schema_error_exit_1(tmp_path, capsys):
    obj = io.channel_to_json(ch.identity_channel(2))
    obj["kraus"][0] = [[[1, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]]]
    code, _, err = run(capsys, "validate", write(tmp_path, "bad.json", obj))
    assert code == 1 and "kraus[0]" in err
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 1
    (tmp_path / "nan.json").write_text('{"source_dim": 1, "target_dim": 1, "kraus": [[[NaN, 0]]]}')
    code, _, _ = run(capsys, "validate", str(tmp_path / "nan.json"))
    assert code == 1


def test_tolerance_env_override(tmp_path, capsys, monkeypatch):
    v = np.eye(2) * np.sqrt(1 + 1e-7)
    path = write(tmp_path, "near.json", io.channel_to_json(ch.KrausChannel.from_ops([v])))
    _, out, _ = run(capsys, "validate", path)
    assert "TP no" in out
    monkeypatch.setenv("CPMGLUE_TOL", "1e-6")
    _, out, _ = run(capsys, "validate", path)
    assert "TP yes" in out
    monkeypatch.setenv("CPMGLUE_TOL", "abc")
    code, _, _ = run(capsys, "validate", path)
    assert code == 1


# -- glue / extract / decompose / apply ---------------------------------------

def fixture_files(tmp_path, rng):
    phi1 = ch.li_kraus(rand.tp_channel(rng, 2, 2, 2))
    phi2 = ch.li_kraus(rand.tp_channel(rng, 1, 1, 1))
    c = rand.contraction(rng, 2, 1, 0.8)
    paths = {
        "phi1": write(tmp_path, "phi1.json", io.channel_to_json(phi1)),
        "phi2": write(tmp_path, "phi2.json", io.channel_to_json(phi2)),
        "split": write(tmp_path, "split.json", io.split_to_json(BlockSplit.square(2, 1))),
        "c": write(tmp_path, "c.json", io.matrix_to_json(c)),
    }
    return phi1, phi2, c, paths


def test_glue_then_extract_round_trip(tmp_path, capsys, rng):
    phi1, phi2, c, p = fixture_files(tmp_path, rng)
    out = str(tmp_path / "glued.json")
    code, _, _ = run(capsys, "glue", p["phi1"], p["phi2"], "--matrix", p["c"], "--split", p["split"], "-o", out)
    assert code == 0
    glued = io.read_channel(out)
    ref = build_gluing(phi1, phi2, GluingMatrix.canonical(c, phi1, phi2), BlockSplit.square(2, 1))
    assert ch.distance(glued, ref) <= 1e-12
    code, val, _ = run(capsys, "validate", out)
    assert code == 0 and val.startswith("CP yes, TP yes")
    gfile = str(tmp_path / "g.json")
    code, _, _ = run(capsys, "extract", out, p["phi1"], p["phi2"], "--split", p["split"], "-o", gfile)
    assert code == 0
    g = io.gluing_from_json(io.load(gfile))
    np.testing.assert_allclose(g.c, c, atol=1e-10)
    # glue on the extract output reproduces the channel
    again = str(tmp_path / "again.json")
    code, _, _ = run(capsys, "glue", p["phi1"], p["phi2"], "--matrix", gfile, "--split", p["split"], "-o", again)
    assert code == 0 and ch.distance(io.read_channel(again), glued) <= 1e-9


def test_extract_with_embedded_reps(tmp_path, capsys, rng):
    _, _, c, p = fixture_files(tmp_path, rng)
    out = str(tmp_path / "glued.json")
    run(capsys, "glue", p["phi1"], p["phi2"], "--matrix", p["c"], "--split", p["split"], "-o", out)
    reps = write(tmp_path, "reps.json", io.load(out)["gluing"])
    gfile = str(tmp_path / "g.json")
    code, _, _ = run(capsys, "extract", out, p["phi1"], p["phi2"], "--split", p["split"], "--reps", reps, "-o", gfile)
    assert code == 0
    np.testing.assert_allclose(io.gluing_from_json(io.load(gfile)).c, c, atol=1e-10)


def test_glue_is_byte_deterministic(tmp_path, capsys, rng):
    _, _, _, p = fixture_files(tmp_path, rng)
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.json"
        run(capsys, "glue", p["phi1"], p["phi2"], "--matrix", p["c"], "--split", p["split"], "-o", str(out))
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_glue_invalid_matrix_exit_2(tmp_path, capsys, rng):
    _, _, _, p = fixture_files(tmp_path, rng)
    big = write(tmp_path, "big.json", io.matrix_to_json(np.array([[1.5], [0.0]])))
    code, _, err = run(capsys, "glue", p["phi1"], p["phi2"], "--matrix", big, "--split", p["split"],
                       "-o", str(tmp_path / "o.json"))
    assert code == 2 and "sigma_max = 1.5" in err


def test_glue_unitary_scalar_and_zero(tmp_path, capsys, rng):
    u1, u2 = rand.unitary(rng, 2), rand.unitary(rng, 2)
    p1 = write(tmp_path, "u1.json", io.channel_to_json(ch.unitary_channel(u1)))
    p2 = write(tmp_path, "u2.json", io.channel_to_json(ch.unitary_channel(u2)))
    split = write(tmp_path, "split.json", io.split_to_json(BlockSplit.square(2, 2)))
    for r in (1.0, 0.0):
        m = write(tmp_path, "c.json", [[[r, 0.0]]])
        out = str(tmp_path / "o.json")
        assert run(capsys, "glue", p1, p2, "--matrix", m, "--split", split, "-o", out)[0] == 0
        got = io.read_channel(out)
        # C refers to the canonical reps, which may carry a phase relative to u1, u2
        r1, r2 = ch.li_kraus(ch.unitary_channel(u1)), ch.li_kraus(ch.unitary_channel(u2))
        ref = build_gluing(r1, r2, GluingMatrix([[r]], r1, r2), BlockSplit.square(2, 2))
        assert ch.distance(got, ref) <= 1e-12
        assert ch.classify(got).kraus_number == (1 if r == 1 else 2)


def test_glue_lsp_vectors(tmp_path, capsys, rng):
    phi1, phi2, _, p = fixture_files(tmp_path, rng)
    c1 = write(tmp_path, "c1.json", io.vector_to_json([0.6, 0.0]))
    c2 = write(tmp_path, "c2.json", io.vector_to_json([1.0]))
    out = str(tmp_path / "o.json")
    code, _, _ = run(capsys, "glue", p["phi1"], p["phi2"], "--lsp", c1, c2, "--split", p["split"], "-o", out)
    assert code == 0
    g = io.gluing_from_json(io.load(out)["gluing"])
    np.testing.assert_allclose(g.c, [[0.6], [0.0]])


def test_extract_swap_mixture_and_errors(tmp_path, capsys):
    rep1, rep2 = cs.swap_mixture_reps(PAULI_X, PAULI_X)
    phi = write(tmp_path, "swap.json", io.channel_to_json(cs.swap_mixture(PAULI_X, PAULI_X)))
    p1 = write(tmp_path, "p1.json", io.channel_to_json(rep1))
    p2 = write(tmp_path, "p2.json", io.channel_to_json(rep2))
    split = write(tmp_path, "split.json", io.split_to_json(BlockSplit.square(2, 2)))
    reps = write(tmp_path, "reps.json", io.gluing_to_json(GluingMatrix(np.zeros((2, 2)), rep1, rep2)))
    code, out, _ = run(capsys, "extract", phi, p1, p2, "--split", split, "--reps", reps,
                       "-o", str(tmp_path / "g.json"))
    assert code == 0 and out.strip() == "C = [[0,1],[1,0]]"
    ident = write(tmp_path, "id.json", io.channel_to_json(ch.identity_channel(2)))
    code, _, err = run(capsys, "extract", phi, ident, p2, "--split", split, "-o", str(tmp_path / "g.json"))
    assert code == 2 and "residual" in err


def test_decompose_cli(tmp_path, capsys):
    m = write(tmp_path, "c.json", io.matrix_to_json(np.zeros((2, 2))))
    out = str(tmp_path / "terms.json")
    code, text, _ = run(capsys, "decompose", m, "-o", out)
    assert code == 0
    assert [line.split()[0] for line in text.splitlines()] == ["0.5", "0.5"]
    assert [t["weight"] for t in io.load(out)] == [0.5, 0.5]


def test_apply_cli(tmp_path, capsys, rng):
    phi = rand.tp_channel(rng, 2, 3)
    rho = rand.density_matrix(rng, 2)
    p = write(tmp_path, "phi.json", io.channel_to_json(phi))
    s = write(tmp_path, "rho.json", io.matrix_to_json(rho))
    code, out, _ = run(capsys, "apply", p, s)
    assert code == 0
    np.testing.assert_allclose(io.matrix_from_json(io.loads(out)), ch.apply(phi, rho), atol=1e-15)


# -- demos --------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(DEMOS))
def test_demos_pass(capsys, name):
    code, out, _ = run(capsys, "demo", name)
    assert code == 0, out
    assert "FAIL" not in out


def test_demo_swap_mixture_summary(capsys):
    _, out, _ = run(capsys, "demo", "swap-mixture")
    assert out.splitlines()[0] == "SP: yes, LSP: no, C=[[0,1],[1,0]], K=2"


def test_demo_unitary_family_table(capsys):
    _, out, _ = run(capsys, "demo", "unitary-family")
    lines = out.splitlines()
    assert lines[0] == "r,coherence"
    rows = [tuple(map(float, l.split(","))) for l in lines[1:6]]
    assert rows[0][1] == pytest.approx(0.0, abs=1e-10) and rows[-1][1] == pytest.approx(1.0, abs=1e-10)
    assert all(b[1] >= a[1] for a, b in zip(rows, rows[1:]))


def test_demo_ancilla_verdicts(capsys):
    _, out, _ = run(capsys, "demo", "ancilla")
    assert "[pass] pure sigma: LSP yes" in out and "[pass] mixed sigma: LSP no" in out


def test_unknown_demo_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["demo", "nope"])
    assert info.value.code == 2


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "id.json", io.channel_to_json(ch.identity_channel(1)))
    res = subprocess.run([sys.executable, "-m", "cpmglue.cli", "validate", path],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("CP yes, TP yes, K=1")
