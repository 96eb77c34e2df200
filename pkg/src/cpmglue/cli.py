"""
``cpmglue`` command line.

Exit codes: 0 success, 1 I/O or schema error, 2 mathematical verdict
failure. ``CPMGLUE_TOL`` overrides the 1e-9 verdict tolerance; it never
affects serialized data.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import channel as ch
from . import io
from . import numerics as nx
from .demos import DEMOS
from .errors import (GluingError, InvalidGluingMatrix, InvalidInput, InvalidLspVectors,
                     NotAGluingOfThese, NotARepresentation, NotInGluingFamily,
                     NotSubspacePreserving)
from .gluing import (GluingMatrix, LspVectors, analyze, build_gluing, build_lsp,
                     extract_gluing_matrix, extreme_decompose)
from .subspace import is_sp, sp_blocks

EXIT_OK, EXIT_IO, EXIT_MATH = 0, 1, 2


def verdict_tol() -> float:
    raw = os.environ.get("CPMGLUE_TOL")
    if not raw:
        return nx.DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise io.SchemaError("CPMGLUE_TOL", f"not a number: {raw!r}") from None
    if not np.isfinite(tol) or tol <= 0:
        raise io.SchemaError("CPMGLUE_TOL", "must be a positive finite number")
    return tol


def fmt(x) -> str:
    return f"{float(x):.12g}"


def fmt_complex(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return fmt(z.real)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}i"


def fmt_matrix(m) -> str:
    """Entries rounded at 1e-12 absolute so solver noise does not show; files keep full precision."""
    m = np.round(np.asarray(m, dtype=np.complex128), 12) + 0.0
    rows = ",".join("[" + ",".join(fmt_complex(z) for z in row) + "]" for row in m)
    return f"[{rows}]"


def yes(flag) -> str:
    return "yes" if flag else "no"


def cmd_validate(args) -> int:
    tol = verdict_tol()
    phi = io.read_channel(args.channel)
    rep = ch.classify(phi, tol)
    print(f"CP {yes(rep.is_cp)}, TP {yes(rep.is_tp)}, K={rep.kraus_number}")
    print(f"tp_residual {fmt(rep.tp_residual)}, min_choi_eigenvalue {fmt(rep.min_choi_eigenvalue)}")
    if args.split:
        split = io.read_split(args.split)
        if (phi.source_dim, phi.target_dim) != (split.source_dim, split.target_dim):
            raise io.SchemaError("split", "dimensions do not match the channel")
        sp = is_sp(phi, split, tol)
        if not sp:
            print("SP no")
        else:
            b1, b2 = sp_blocks(phi, split, tol)
            g = extract_gluing_matrix(phi, b1, b2, split)
            info = analyze(g, tol)
            print(f"SP yes, LSP {yes(info.is_lsp)}, singulars {','.join(fmt(s) for s in info.singulars)}")
            print(f"extreme {yes(info.is_extreme)}, predicted K={info.predicted_kraus_number}")
    return EXIT_OK if rep.is_cp else EXIT_MATH


def _read_gluing_source(path, phi1, phi2) -> GluingMatrix:
    obj = io.load(path)
    if isinstance(obj, dict) and "c" in obj:
        return io.gluing_from_json(obj)
    return GluingMatrix.canonical(io.matrix_from_json(obj), phi1, phi2)


def cmd_glue(args) -> int:
    phi1, phi2 = io.read_channel(args.phi1), io.read_channel(args.phi2)
    split = io.read_split(args.split)
    if args.matrix:
        g = _read_gluing_source(args.matrix, phi1, phi2)
        out = build_gluing(phi1, phi2, g, split)
    else:
        c1 = io.vector_from_json(io.load(args.lsp[0]))
        c2 = io.vector_from_json(io.load(args.lsp[1]))
        v = LspVectors(c1, c2)
        rep1, rep2 = ch.li_kraus(phi1), ch.li_kraus(phi2)
        out = build_lsp(phi1, phi2, v, split, rep1=rep1, rep2=rep2)
        g = GluingMatrix(v.matrix(), rep1, rep2)
    io.dump(io.channel_to_json(out, name="gluing", gluing=g), args.output)
    info = analyze(g, verdict_tol())
    print(f"wrote {args.output}: K={ch.classify(out).kraus_number}, "
          f"singulars {','.join(fmt(s) for s in info.singulars)}")
    return EXIT_OK


def cmd_extract(args) -> int:
    phi = io.read_channel(args.phi)
    phi1, phi2 = io.read_channel(args.phi1), io.read_channel(args.phi2)
    split = io.read_split(args.split)
    rep1 = rep2 = None
    if args.reps:
        g0 = io.gluing_from_json(io.load(args.reps))
        rep1, rep2 = g0.rep1, g0.rep2
    g = extract_gluing_matrix(phi, phi1, phi2, split, rep1=rep1, rep2=rep2)
    io.dump(io.gluing_to_json(g), args.output)
    print(f"C = {fmt_matrix(g.c)}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    obj = io.load(args.matrix)
    c = io.gluing_from_json(obj).c if isinstance(obj, dict) and "c" in obj else io.matrix_from_json(obj)
    terms = extreme_decompose(c)
    for w, d in terms:
        print(f"{fmt(w)}  {fmt_matrix(d)}")
    if args.output:
        io.dump([{"weight": w, "point": io.matrix_to_json(d)} for w, d in terms], args.output)
    return EXIT_OK


def cmd_apply(args) -> int:
    phi = io.read_channel(args.phi)
    rho = io.matrix_from_json(io.load(args.state))
    print(io.dumps(io.matrix_to_json(ch.apply(phi, rho))), end="")
    return EXIT_OK


def cmd_demo(args) -> int:
    claims, extra = DEMOS[args.name](verdict_tol())
    if args.name == "unitary-family":
        print("r,coherence")
        for r, m in extra:
            print(f"{fmt(r)},{fmt(m)}")
    elif args.name == "swap-mixture":
        info = analyze(extra, verdict_tol())
        print(f"SP: {yes(claims[0].passed)}, LSP: {yes(info.is_lsp)}, C={fmt_matrix(extra.c)}, "
              f"K={info.predicted_kraus_number}")
    for c in claims:
        print(f"[{'pass' if c.passed else 'FAIL'}] {c.text} (residual {fmt(c.residual)})")
    return EXIT_OK if all(c.passed for c in claims) else EXIT_MATH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cpmglue", description="Gluings of completely positive maps.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="classify a channel file")
    v.add_argument("channel")
    v.add_argument("--split")
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser("glue", help="build a gluing of two channels")
    g.add_argument("phi1")
    g.add_argument("phi2")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="matrix file, or gluing file carrying its reps")
    src.add_argument("--lsp", nargs=2, metavar=("C1", "C2"), help="two vector files")
    g.add_argument("--split", required=True)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_glue)

    e = sub.add_parser("extract", help="recover the gluing matrix of a channel")
    e.add_argument("phi")
    e.add_argument("phi1")
    e.add_argument("phi2")
    e.add_argument("--split", required=True)
    e.add_argument("--reps", help="gluing file whose rep1/rep2 fix the Kraus sets")
    e.add_argument("-o", "--output", required=True)
    e.set_defaults(func=cmd_extract)

    d = sub.add_parser("decompose", help="extreme-point decomposition of a gluing matrix")
    d.add_argument("matrix")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_decompose)

    m = sub.add_parser("demo", help="run a worked example with checked claims")
    m.add_argument("name", choices=sorted(DEMOS))
    m.set_defaults(func=cmd_demo)

    a = sub.add_parser("apply", help="apply a channel to a state matrix")
    a.add_argument("phi")
    a.add_argument("state")
    a.set_defaults(func=cmd_apply)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except io.SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidGluingMatrix as exc:
        print(f"invalid gluing matrix: sigma_max = {fmt(exc.sigma_max)}", file=sys.stderr)
        return EXIT_MATH
    except (NotAGluingOfThese, NotInGluingFamily) as exc:
        print(f"error: {exc} (residual {fmt(exc.residual)})", file=sys.stderr)
        return EXIT_MATH
    except (NotSubspacePreserving, NotARepresentation, InvalidLspVectors) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except InvalidInput as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GluingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
