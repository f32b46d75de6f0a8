"""Command-line front door.

Every subcommand loads a graph document, runs one pipeline, and writes
line-delimited JSON records (or CSV with --csv) to stdout or --out.  Output
is byte-deterministic for a fixed invocation.  Errors print one JSON record
to stderr and exit with 1 (usage), 2 (parse), 3 (validation), or 4 (numeric).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import errors as err
from .kgraph import (
    load_kgraph_file,
    normal_form,
    vertex_path,
)
from .measure import CylinderFn, MeasureSpec, cylinder_measure, embed_to_interval
from .perron import hausdorff_dimension, is_strongly_connected, pf_data
from .sbfs import check_ck_relations
from .spectral import (
    default_kernel,
    default_tgrid,
    eig_sym,
    gft,
    incidence_matrices,
    kgraph_laplacian,
    localization_probe,
    reconstruct,
    spectral_wavelet,
)
from .traffic import PreferredPaths, default_preferred_paths, traffic_measure, traffic_wavelet_family
from .wavelets import analyze, build_wavelet_family, markov_wavelets, subspace_compare, synthesize, wavelet_basis

USAGE_EXIT = 1
PARSE_EXIT = 2
VALIDATION_EXIT = 3
NUMERIC_EXIT = 4

_NUMERIC_ERRORS = (err.ConvergenceFailure, err.DivergentIntegral, err.GridTooCoarse)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _fail(USAGE_EXIT, "usage", message)


def _fail(code: int, kind: str, message: str, reason: str | None = None):
    record = {"error": kind, "message": str(message)}
    if reason:
        record["reason"] = reason
    print(json.dumps(record), file=sys.stderr)
    raise SystemExit(code)


def _parse_degree(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        _fail(USAGE_EXIT, "usage", f"bad degree/shape {text!r}; expected e.g. 1,2")


def _parse_word(graph, text: str):
    if text.startswith("@"):
        return vertex_path(graph, text[1:])
    return normal_form(graph, text.split(","))


def _graph_path(args) -> str:
    positional = getattr(args, "graph", None)
    flagged = getattr(args, "graph_flag", None)
    if positional and flagged:
        _fail(USAGE_EXIT, "usage", "give the graph positionally or via --graph, not both")
    path = positional or flagged
    if not path:
        _fail(USAGE_EXIT, "usage", "a graph document is required")
    return path


def _load_graph(args):
    return load_kgraph_file(_graph_path(args))


def _load_measure(graph, args) -> MeasureSpec:
    if getattr(args, "weights", None):
        weights = [Fraction(w) if "/" in w else float(w) for w in args.weights.split(",")]
        exact = getattr(args, "exact", False) and all(isinstance(w, Fraction) for w in weights)
        return MeasureSpec.bernoulli(graph, weights, exact=exact)
    return MeasureSpec.perron_frobenius(graph, exact=getattr(args, "exact", False))


def _emit(args, records: list[dict], csv_fields: list[str] | None = None):
    if getattr(args, "csv", False) and csv_fields:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=csv_fields, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: rec.get(k, "") for k in csv_fields})
        text = buf.getvalue()
    else:
        text = "".join(json.dumps(rec) + "\n" for rec in records)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _signal_from_file(path: str, n: int) -> np.ndarray:
    with open(path) as fh:
        data = json.load(fh)
    sig = np.asarray(data, dtype=float)
    if sig.shape != (n,):
        raise err.DimensionMismatch(f"signal in {path} has shape {sig.shape}, need ({n},)")
    return sig


# -- subcommand handlers ----------------------------------------------------

def _cmd_validate(args):
    graph = _load_graph(args)
    per_color = {c: sum(1 for e in graph.edges.values() if e.color == c)
                 for c in range(1, graph.k + 1)}
    _emit(args, [{
        "ok": True,
        "k": graph.k,
        "vertices": len(graph.vertices),
        "edges_per_color": per_color,
        "squares": len(graph.squares),
        "cube_condition": "checked" if graph.k >= 3 else "n/a (k<3)",
        "strongly_connected": is_strongly_connected(graph),
    }])


def _cmd_pf(args):
    graph = _load_graph(args)
    pf = pf_data(graph, tol=args.tol)
    rec = {"rho": [float(r) for r in pf.rho],
           "x_lambda": {v: float(x) for v, x in zip(graph.vertices, pf.x_lambda)}}
    if args.hausdorff:
        rec["hausdorff_dimension"] = hausdorff_dimension(graph)
    _emit(args, [rec])


def _cmd_measure(args):
    graph = _load_graph(args)
    spec = _load_measure(graph, args)
    records = []
    for text in args.path:
        p = _parse_word(graph, text)
        value = cylinder_measure(spec, p)
        rec = {"path": text, "normal_form": list(p.word) or ["@" + p.range],
               "measure": str(value) if spec.exact else float(value)}
        if args.embed:
            lo, hi = embed_to_interval(graph, p)
            rec["interval"] = [str(lo), str(hi)]
        records.append(rec)
    _emit(args, records, csv_fields=["path", "measure"])


def _cmd_ck_check(args):
    graph = _load_graph(args)
    spec = _load_measure(graph, args)
    report = check_ck_relations(spec, graph, _parse_degree(args.level))
    _emit(args, report.to_records(),
          csv_fields=["relation", "max_deviation"])


def _cmd_wavelets(args):
    graph = _load_graph(args)
    family = build_wavelet_family(graph, shape=_parse_degree(args.shape))
    if args.compare:
        coarse = build_wavelet_family(
            graph, shape=tuple(args.compare * j for j in family.shape))
        _emit(args, [subspace_compare(family, coarse).to_record()])
        return
    if args.list_family:
        records = []
        for v, fn in zip(graph.vertices, family.scaling):
            records.append({"kind": "scaling", "vertex": v, "m": 0, "terms": fn.to_records()})
        for (m, v), fn in family.wavelets:
            records.append({"kind": "wavelet", "vertex": v, "m": m, "terms": fn.to_records()})
        _emit(args, records)
        return
    basis = wavelet_basis(family, args.depth)
    if args.analyze:
        with open(args.analyze) as fh:
            fn = CylinderFn.from_records(graph, [json.loads(line) for line in fh if line.strip()])
        coeffs = analyze(basis, fn)
        _emit(args, [{**label, "coeff": float(c)} for label, c in zip(basis.labels, coeffs)])
        return
    if args.synthesize:
        with open(args.synthesize) as fh:
            coeffs = [float(json.loads(line)["coeff"]) for line in fh if line.strip()]
        fn = synthesize(basis, coeffs)
        _emit(args, fn.to_records())
        return
    _emit(args, basis.to_records())


def _cmd_markov(args):
    weights = [Fraction(w) if "/" in w else float(w) for w in args.weights.split(",")]
    system = markov_wavelets(args.alphabet, weights, args.depth)
    _emit(args, system.to_records())


def _cmd_traffic(args):
    graph = _load_graph(args)
    pf = pf_data(graph)
    if args.prefs:
        with open(args.prefs) as fh:
            assignment = {}
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                assignment[rec["vertex"]] = _parse_word(graph, rec["path"])
        root = args.root or next(iter(assignment.values())).range
        prefs = PreferredPaths(root, assignment)
    else:
        prefs = default_preferred_paths(graph, args.root or graph.vertices[0])
    nu = traffic_measure(graph, pf, prefs)
    records = [{"kind": "measure",
                "values": {v: float(x) for v, x in zip(graph.vertices, nu)}}]
    family = traffic_wavelet_family(graph, pf, prefs)
    records.extend(family.to_records())
    records.append({"kind": "summary", "complete": family.complete})
    _emit(args, records)


def _cmd_laplacian(args):
    graph = _load_graph(args)
    inc = incidence_matrices(graph)
    records = []
    for color, (mat, order) in enumerate(zip(inc.matrices, inc.edge_orders), start=1):
        records.append({"kind": "incidence", "color": color,
                        "edges": list(order), "matrix": mat.tolist()})
    records.append({"kind": "laplacian",
                    "matrix": kgraph_laplacian(inc).tolist()})
    _emit(args, records)


def _cmd_spectral(args):
    graph = _load_graph(args)
    spec = eig_sym(kgraph_laplacian(incidence_matrices(graph)))
    kernel = default_kernel()
    if args.eig:
        _emit(args, spec.to_records(), csv_fields=["eigenvalue"])
        return
    if args.gft:
        sig = _signal_from_file(args.gft, spec.n)
        coeffs = gft(spec, sig)
        _emit(args, [{"index": i, "coefficient": float(c)} for i, c in enumerate(coeffs, 1)],
              csv_fields=["index", "coefficient"])
        return
    if args.wavelet:
        n = graph.vertex_index[args.n]
        psi = spectral_wavelet(spec, kernel, args.t, n)
        _emit(args, [{"t": args.t, "n": args.n, "m": v, "value": float(x)}
                     for v, x in zip(graph.vertices, psi)],
              csv_fields=["t", "n", "m", "value"])
        return
    if args.reconstruct:
        sig = _signal_from_file(args.reconstruct, spec.n)
        if args.tgrid:
            lo, hi, count = args.tgrid.split(",")
            grid = np.geomspace(float(lo), float(hi), int(count))
        else:
            grid = default_tgrid(spec)
        rec = reconstruct(spec, kernel, sig, grid)
        _emit(args, [{"vertex": v, "value": float(x)} for v, x in zip(graph.vertices, rec)],
              csv_fields=["vertex", "value"])
        return
    if args.localize:
        n, m = graph.vertex_index[args.n], graph.vertex_index[args.m]
        ts = [float(x) for x in args.tlist.split(",")]
        probe = localization_probe(spec, kernel, n, m, ts)
        recs = probe.to_records()
        recs.append({"slope": probe.slope})
        _emit(args, recs, csv_fields=["t", "ratio"])
        return
    _fail(USAGE_EXIT, "usage", "spectral needs one of --eig/--gft/--wavelet/--reconstruct/--localize")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgraphwave",
                     description="wavelet analysis on finite higher-rank graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("graph", nargs="?", default=None,
                           help="path to a .kg graph document")
            p.add_argument("--graph", dest="graph_flag", default=None,
                           help="alternative to the positional graph argument")
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--csv", action="store_true", help="emit CSV where supported")
        p.add_argument("--tol", type=float, default=1e-13, help="iteration tolerance")

    p = sub.add_parser("validate", help="load a graph document and report its shape")
    common(p)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("pf", help="Perron-Frobenius spectral data")
    common(p)
    p.add_argument("--hausdorff", action="store_true")
    p.set_defaults(handler=_cmd_pf)

    p = sub.add_parser("measure", help="cylinder measures of paths")
    common(p)
    p.add_argument("--path", action="append", required=True,
                   help="edge word like e,f1 (or @v for a vertex); repeatable")
    p.add_argument("--weights", help="Bernoulli letter weights p1,p2,... (bouquet only)")
    p.add_argument("--exact", action="store_true", help="rational output when available")
    p.add_argument("--embed", action="store_true", help="also emit the N-adic interval")
    p.set_defaults(handler=_cmd_measure)

    p = sub.add_parser("ck-check", help="verify the Cuntz-Krieger relations at a level")
    common(p)
    p.add_argument("--level", required=True, help="test level, e.g. 2,2")
    p.add_argument("--weights", help="Bernoulli letter weights (bouquet only)")
    p.set_defaults(handler=_cmd_ck_check)

    p = sub.add_parser("wavelets", help="path-space wavelet family and transforms")
    common(p)
    p.add_argument("--shape", required=True, help="wavelet shape, e.g. 1,2")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--list-family", action="store_true")
    p.add_argument("--analyze", help="cylinder-function records file to analyze")
    p.add_argument("--synthesize", help="coefficient records file to synthesize")
    p.add_argument("--compare", type=int,
                   help="compare against the family of shape L*J for this integer L")
    p.set_defaults(handler=_cmd_wavelets)

    p = sub.add_parser("markov", help="full-shift wavelets for a Bernoulli measure")
    common(p, graph=False)
    p.add_argument("--alphabet", type=int, required=True, help="number of letters N")
    p.add_argument("--weights", required=True, help="letter weights p1,...,pN")
    p.add_argument("--depth", type=int, default=1)
    p.set_defaults(handler=_cmd_markov)

    p = sub.add_parser("traffic", help="preferred-path vertex wavelets")
    common(p)
    p.add_argument("--root", help="root vertex (default: first vertex)")
    p.add_argument("--prefs", help="preferred-path records file {vertex, path}")
    p.set_defaults(handler=_cmd_traffic)

    p = sub.add_parser("laplacian", help="incidence matrices and the k-graph Laplacian")
    common(p)
    p.set_defaults(handler=_cmd_laplacian)

    p = sub.add_parser("spectral", help="eigendata, GFT, spectral wavelets")
    common(p)
    p.add_argument("--eig", action="store_true")
    p.add_argument("--gft", help="signal file (JSON list in vertex order)")
    p.add_argument("--wavelet", action="store_true")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--n", help="wavelet center vertex")
    p.add_argument("--m", help="probe target vertex")
    p.add_argument("--reconstruct", help="signal file to reconstruct")
    p.add_argument("--tgrid", help="lo,hi,count for the scale grid")
    p.add_argument("--tlist", help="comma-separated scales for --localize")
    p.add_argument("--localize", action="store_true")
    p.set_defaults(handler=_cmd_spectral)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args)
    except err.ParseError as exc:
        _fail(PARSE_EXIT, "parse", exc)
    except FileNotFoundError as exc:
        _fail(PARSE_EXIT, "parse", exc)
    except json.JSONDecodeError as exc:
        _fail(PARSE_EXIT, "parse", exc)
    except err.ValidationError as exc:
        _fail(VALIDATION_EXIT, "validation", exc, reason=exc.reason)
    except _NUMERIC_ERRORS as exc:
        _fail(NUMERIC_EXIT, "numeric", exc)
    except (err.KGraphWaveError, ValueError) as exc:
        _fail(VALIDATION_EXIT, "validation", exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
