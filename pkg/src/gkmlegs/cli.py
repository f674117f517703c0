"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure (with a witness on stderr),
2 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import corpus
from .bundle import BundleError, InternalInvariant, LegBundle, Projectivization, projectivize
from .cohomology import (
    CohomologyClass,
    CohomologyError,
    ModuleDecomposition,
    bh_residue,
    c1_tautological,
    chern,
    decompose,
    mu,
    validate_class,
)
from .graph import Graph, validate_graph
from .io import DocumentError, dumps, load_path, parse, serialize
from .labeled import LabeledGraph, full_validation, is_gkm, rank_of_labels
from .poly import PolynomialError

log = logging.getLogger("gkmlegs")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class CommandFailed(Exception):
    """Domain failure to be reported with exit code 1."""


def _builtin_document(name: str, seed=0, rank=2) -> dict:
    try:
        obj = corpus.load_builtin(name, seed=seed, rank=rank)
    except KeyError as exc:
        raise DocumentError(str(exc.args[0])) from exc
    return serialize(obj)


def read_document(path: str) -> dict:
    if path.startswith("builtin:"):
        return _builtin_document(path[len("builtin:"):])
    try:
        return load_path(path)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc


def load_object(path: str):
    return parse(read_document(path))


def load_bundle(path: str) -> LegBundle:
    obj = load_object(path)
    if isinstance(obj, Projectivization):
        return obj.bundle
    if not isinstance(obj, LegBundle):
        raise DocumentError(f"{path} is not a leg-bundle document")
    return obj


def _names(rank: int):
    return ["a", "b"] if rank == 2 else None


def _class_lines(cls: CohomologyClass, indent="  ") -> list:
    names = _names(cls.nvars)
    return [f"{indent}{v}: {x.format(names)}" for v, x in cls.values.items()]


def emit(args, doc: dict, pretty_lines: list | None = None) -> None:
    if args.format == "pretty" and pretty_lines is not None:
        text = "\n".join(pretty_lines) + "\n"
    else:
        text = dumps(doc)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    doc = read_document(args.path)
    kind = doc.get("kind") if isinstance(doc, dict) else None
    report = {"kind": kind, "valid": True, "errors": []}
    try:
        obj = parse(doc)
    except (BundleError, CohomologyError) as exc:
        report.update(valid=False, errors=[str(exc)])
        obj = None
    if isinstance(obj, Graph):
        report["errors"] = validate_graph(obj).errors
    elif isinstance(obj, LabeledGraph):
        report["errors"] = full_validation(obj).errors
        if not report["errors"]:
            report["gkm"] = is_gkm(obj)[0]
            report["rank"] = rank_of_labels(obj)
    elif isinstance(obj, LegBundle):
        report["rank"] = obj.rank
        report["gkm"] = is_gkm(obj.total)[0]
    elif isinstance(obj, Projectivization):
        report["rank"] = obj.rank
        report["gkm"] = obj.is_gkm()[0]
    elif isinstance(obj, CohomologyClass):
        try:
            validate_class(obj.carrier, obj)
        except BundleError as exc:
            report["errors"] = [str(exc)]
    report["valid"] = not report["errors"]
    lines = [f"{kind}: {'valid' if report['valid'] else 'INVALID'}"]
    if "gkm" in report:
        lines.append(f"  GKM: {'yes' if report['gkm'] else 'no'}")
    if "rank" in report:
        lines.append(f"  rank: {report['rank']}")
    lines += [f"  error: {e}" for e in report["errors"]]
    emit(args, report, lines)
    return EXIT_OK if report["valid"] else EXIT_FAIL


def cmd_projectivize(args) -> int:
    xi = load_bundle(args.path)
    P = projectivize(xi)
    doc = serialize(P)
    vertical = sum(1 for k in P.classification.values() if k == "vertical")
    lines = [
        f"projectivization: {len(P.total.graph.vertices)} vertices, "
        f"{vertical} vertical + {len(P.classification) - vertical} horizontal edges",
        f"  GKM: {'yes' if doc['gkm'] else 'no'}",
    ]
    emit(args, doc, lines)
    return EXIT_OK


def cmd_chern(args) -> int:
    xi = load_bundle(args.path)
    c = chern(xi, args.k)
    emit(args, serialize(c), [f"c_{args.k}:"] + _class_lines(c))
    return EXIT_OK


def cmd_taut_c1(args) -> int:
    xi = load_bundle(args.path)
    t = c1_tautological(xi) ** args.power
    head = "t:" if args.power == 1 else f"t^{args.power}:"
    emit(args, serialize(t), [head] + _class_lines(t))
    return EXIT_OK


def cmd_bh_check(args) -> int:
    xi = load_bundle(args.path)
    res = bh_residue(xi)
    zero = sum(1 for x in res.values.values() if x.is_zero())
    total = len(res.values)
    doc = serialize(res)
    doc["zero_vertices"] = zero
    doc["vertices"] = total
    line = f"residue = 0 at {zero}/{total} vertices"
    lines = [line] + ([] if zero == total else _class_lines(res))
    emit(args, doc, lines)
    if zero != total:
        raise CommandFailed(line)
    return EXIT_OK


def _read_class(path: str, carrier: LabeledGraph) -> CohomologyClass:
    doc = read_document(path)
    if isinstance(doc, dict) and "kind" not in doc:
        doc = {"kind": "class", "schema_version": 1, **doc}
    obj = parse(doc, carrier=carrier)
    if not isinstance(obj, CohomologyClass):
        raise DocumentError(f"{path} is not a class document")
    return obj


def cmd_decompose(args) -> int:
    xi = load_bundle(args.path)
    P = projectivize(xi)
    f = _read_class(args.cls, P.total)
    d = decompose(P, f)
    doc = serialize(d)
    doc["reassembly"] = mu(P, d.Q) == f
    lines = []
    for k, q in enumerate(d.Q):
        lines.append(f"Q_{k}:")
        lines += _class_lines(q)
    lines.append(f"reassembly: {'ok' if doc['reassembly'] else 'FAILED'}")
    emit(args, doc, lines)
    return EXIT_OK


def cmd_mu(args) -> int:
    xi = load_bundle(args.path)
    P = projectivize(xi)
    doc = read_document(args.q)
    if isinstance(doc, dict) and "kind" not in doc:
        if "Q" not in doc:
            raise DocumentError(f"{args.q} has no \"Q\" list")
        Q = [parse({"kind": "class", "schema_version": 1, **q}, carrier=P.base) for q in doc["Q"]]
    else:
        obj = parse(doc)
        if not isinstance(obj, ModuleDecomposition):
            raise DocumentError(f"{args.q} is not a decomposition document")
        Q = list(obj.Q)
        if any(q.carrier != P.base for q in Q):
            raise DocumentError("decomposition lives over a different base")
    for q in Q:
        validate_class(P.base, q)
    f = mu(P, Q)
    emit(args, serialize(f), ["mu(Q):"] + _class_lines(f))
    return EXIT_OK


def cmd_corpus_list(args) -> int:
    names = list(corpus.BUILTINS)
    emit(args, {"names": names}, names)
    return EXIT_OK


def cmd_corpus_emit(args) -> int:
    doc = _builtin_document(args.name, seed=args.seed, rank=args.rank)
    emit(args, doc, None)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "pretty"], default="json", help="output format")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="gkmlegs",
        description="Labeled graphs with legs, leg bundles, projectivizations and their cohomology.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a document")
    p.add_argument("path", help="JSON file or builtin:NAME")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("projectivize", parents=[common], help="projectivize a leg bundle")
    p.add_argument("path")
    p.set_defaults(func=cmd_projectivize)

    coh = sub.add_parser("cohomology", help="cohomology computations")
    csub = coh.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("chern", parents=[common], help="equivariant Chern class of a bundle")
    p.add_argument("path")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_chern)
    p = csub.add_parser("taut-c1", parents=[common], help="first Chern class t of the tautological bundle")
    p.add_argument("path")
    p.add_argument("--power", type=int, default=1)
    p.set_defaults(func=cmd_taut_c1)
    p = csub.add_parser("bh-check", parents=[common], help="check the Borel-Hirzebruch relation")
    p.add_argument("path")
    p.set_defaults(func=cmd_bh_check)
    p = csub.add_parser("decompose", parents=[common], help="decompose a class on the projectivization")
    p.add_argument("path")
    p.add_argument("--class", dest="cls", required=True, metavar="FILE")
    p.set_defaults(func=cmd_decompose)
    p = csub.add_parser("mu", parents=[common], help="assemble sum_k phi*(Q_k) t^k")
    p.add_argument("path")
    p.add_argument("--q", required=True, metavar="FILE")
    p.set_defaults(func=cmd_mu)

    cor = sub.add_parser("corpus", help="built-in examples")
    ksub = cor.add_subparsers(dest="subcommand", required=True)
    p = ksub.add_parser("list", parents=[common])
    p.set_defaults(func=cmd_corpus_list)
    p = ksub.add_parser("emit", parents=[common])
    p.add_argument("name")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank", type=int, default=2)
    p.set_defaults(func=cmd_corpus_emit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except DocumentError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except InternalInvariant as exc:
        return _fail(EXIT_FAIL, f"internal invariant violated: {exc}")
    except (BundleError, CohomologyError, CommandFailed) as exc:
        return _fail(EXIT_FAIL, str(exc))
    except (PolynomialError, ValueError) as exc:
        return _fail(EXIT_INPUT, f"malformed input: {exc}")


def _fail(code: int, message: str) -> int:
    # errors go straight to stderr so they show up whatever logging is configured
    sys.stderr.write(f"gkmlegs: error: {message}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
