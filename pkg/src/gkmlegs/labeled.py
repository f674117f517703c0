"""Connections, label functions and labeled graphs.

A labeled graph carries a label (nonzero integer vector of length ``rank``)
on every flag and, for every flag of a compact edge, a connection map
from the star at one end to the star at the other end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .graph import Graph, GraphMorphism, ValidationReport, natural_key, validate_graph, validate_morphism
from .poly import NotDivisible, Polynomial, divide_exact, linear_multiple, minors_vanish

__all__ = [
    "LabeledGraph",
    "CongruenceReport",
    "validate_connection",
    "validate_labels",
    "is_gkm",
    "rank_of_labels",
    "integer_rank",
    "validate_labeled_morphism",
    "two_valent_connection",
    "flag_key",
    "parse_flag_key",
]


def flag_key(p: str, e: str) -> str:
    return f"{p}|{e}"


def parse_flag_key(key: str) -> tuple:
    p, sep, e = key.partition("|")
    if not sep or not p or not e:
        raise ValueError(f"malformed flag key {key!r}; expected 'vertex|edge'")
    return p, e


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Graph + connection + label function.

    ``labels`` maps every flag ``(vertex, edge)`` to a tuple of ``rank`` ints.
    ``connection`` maps every compact flag ``(p, e)`` to a dict sending each
    edge of star(p) to an edge of star(q), q the other end of e.
    """

    graph: Graph
    rank: int
    labels: Mapping[tuple, tuple]
    connection: Mapping[tuple, Mapping[str, str]] = field(default_factory=dict)

    def label(self, p: str, e: str) -> tuple:
        return self.labels[(p, e)]

    def label_poly(self, p: str, e: str) -> Polynomial:
        return Polynomial.linear(self.labels[(p, e)])

    def transport(self, p: str, e: str, e2: str) -> str:
        return self.connection[(p, e)][e2]

    @property
    def vertices(self) -> tuple:
        return self.graph.vertices

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.rank == other.rank
            and dict(self.labels) == dict(other.labels)
            and {k: dict(v) for k, v in self.connection.items()}
            == {k: dict(v) for k, v in other.connection.items()}
        )

    __hash__ = None

    def relabel(self, vertex_ids: Mapping[str, str], edge_ids: Mapping[str, str]) -> "LabeledGraph":
        """Copy with vertex and edge ids renamed (maps must be injective)."""
        g = Graph(
            [vertex_ids[v] for v in self.graph.vertices],
            {edge_ids[e]: tuple(vertex_ids[v] for v in ends) for e, ends in self.graph.edges.items()},
        )
        labels = {(vertex_ids[p], edge_ids[e]): a for (p, e), a in self.labels.items()}
        conn = {
            (vertex_ids[p], edge_ids[e]): {edge_ids[a]: edge_ids[b] for a, b in m.items()}
            for (p, e), m in self.connection.items()
        }
        return LabeledGraph(g, self.rank, labels, conn)

    # -- JSON ---------------------------------------------------------
    def to_json(self) -> dict:
        doc = self.graph.to_json()
        doc["rank"] = self.rank
        doc["labels"] = {flag_key(p, e): list(self.labels[(p, e)]) for p, e in _sorted_flags(self.labels)}
        doc["connection"] = {
            flag_key(p, e): {a: self.connection[(p, e)][a] for a in sorted(self.connection[(p, e)], key=natural_key)}
            for p, e in _sorted_flags(self.connection)
        }
        return doc

    @classmethod
    def from_json(cls, data: Mapping) -> "LabeledGraph":
        graph = Graph.from_json(data)
        rank = data["rank"]
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
            raise ValueError(f"rank must be a positive integer, got {rank!r}")
        labels = {}
        for key, vec in data.get("labels", {}).items():
            if not isinstance(vec, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in vec):
                raise ValueError(f"label of {key!r} must be a list of integers")
            if len(vec) != rank:
                raise ValueError(f"label of {key!r} has length {len(vec)}, expected {rank}")
            if not any(vec):
                raise ValueError(f"label of {key!r} is the zero vector")
            labels[parse_flag_key(key)] = tuple(vec)
        conn = {}
        for key, table in data.get("connection", {}).items():
            if not isinstance(table, Mapping):
                raise ValueError(f"connection at {key!r} must be an object")
            conn[parse_flag_key(key)] = dict(table)
        return cls(graph, rank, labels, conn)


def _sorted_flags(mapping) -> list:
    return sorted(mapping, key=lambda f: (natural_key(f[0]), natural_key(f[1])))


def two_valent_connection(g: Graph) -> dict:
    """The connection forced on a graph whose vertices have at most two edges."""
    conn = {}
    for p, e in g.compact_flags():
        q = g.other_end(e, p)
        sp, sq = g.star(p), g.star(q)
        if len(sp) > 2 or len(sq) > 2 or len(sp) != len(sq):
            raise ValueError(f"connection along {(p, e)} is not forced")
        table = {e: e}
        rest_p = [x for x in sp if x != e]
        rest_q = [x for x in sq if x != e]
        if rest_p:
            table[rest_p[0]] = rest_q[0]
        conn[(p, e)] = table
    return conn


def validate_connection(g: Graph, connection: Mapping[tuple, Mapping[str, str]]) -> ValidationReport:
    report = ValidationReport()
    compact = set(g.compact_flags())
    for flag in _sorted_flags(connection):
        if flag not in compact:
            report.add(f"connection given at {flag_key(*flag)}, which is not a compact flag")
    for p, e in g.compact_flags():
        key = flag_key(p, e)
        table = connection.get((p, e))
        if table is None:
            report.add(f"connection missing at {key}")
            continue
        q = g.other_end(e, p)
        sp, sq = set(g.star(p)), set(g.star(q))
        if set(table) != sp:
            report.add(f"connection at {key} has domain {sorted(table)} != star({p}) {sorted(sp)}")
            continue
        if sorted(table.values()) != sorted(sq):
            report.add(f"connection at {key} is not a bijection onto star({q})")
            continue
        if table.get(e) != e:
            report.add(f"connection at {key} sends {e!r} to {table.get(e)!r}, must fix the edge")
        back = connection.get((q, e))
        if back is None or set(back) != sq:
            continue  # reported at (q, e)
        for x in sorted(sp, key=natural_key):
            if back.get(table[x]) != x:
                report.add(
                    f"connection at {flag_key(q, e)} is not inverse to {key}: "
                    f"{x!r} -> {table[x]!r} -> {back.get(table[x])!r}"
                )
                break
    return report


@dataclass
class CongruenceReport:
    """Coefficients of the congruence relation along every compact flag.

    ``coefficients[(p, e, e2)]`` is the integer ``c`` with
    label(q, conn(e2)) - label(p, e2) == c * label(p, e), or the nonzero
    witness polynomial when no integer works. ``signs[e]`` records whether
    label(q, e) is +label(p, e) or -label(p, e) (None if neither).
    """

    coefficients: dict = field(default_factory=dict)
    signs: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        out = [
            (flag, w) for flag, w in self.coefficients.items() if not isinstance(w, int)
        ]
        return out

    @property
    def ok(self) -> bool:
        return not self.problems and not self.failures

    def __bool__(self):
        return self.ok

    def messages(self) -> list:
        msgs = list(self.problems)
        for (p, e, e2), w in self.failures:
            msgs.append(f"congruence fails along {flag_key(p, e)} for {e2!r}: witness {w}")
        return msgs


def _congruence_coefficient(diff: tuple, base: tuple):
    """Integer c with diff == c*base, else a witness polynomial."""
    c = linear_multiple(diff, base)
    if c is not None:
        return c
    try:
        divide_exact(Polynomial.linear(diff), base)
    except NotDivisible as exc:
        if exc.remainder:
            return exc.remainder
    # divisible over Q only; report diff itself
    return Polynomial.linear(diff)


def validate_labels(lg: LabeledGraph) -> CongruenceReport:
    report = CongruenceReport()
    g = lg.graph
    for flag in g.flags:
        vec = lg.labels.get(flag)
        if vec is None:
            report.problems.append(f"missing label at {flag_key(*flag)}")
        elif len(vec) != lg.rank or not any(vec):
            report.problems.append(f"bad label {vec} at {flag_key(*flag)}")
    extra = set(lg.labels) - set(g.flags)
    for flag in _sorted_flags(extra):
        report.problems.append(f"label given at {flag_key(*flag)}, which is not a flag")
    if report.problems:
        return report
    for e in g.compact_edges:
        p, q = g.edges[e]
        a, b = lg.labels[(p, e)], lg.labels[(q, e)]
        if a == b:
            report.signs[e] = 1
        elif a == tuple(-x for x in b):
            report.signs[e] = -1
        else:
            report.signs[e] = None
            report.problems.append(f"labels of {e!r} at {p!r} and {q!r} differ by more than sign: {a} vs {b}")
    for p, e in g.compact_flags():
        q = g.other_end(e, p)
        table = lg.connection.get((p, e), {})
        base = lg.labels[(p, e)]
        for e2 in g.star(p):
            if e2 not in table:
                report.problems.append(f"connection at {flag_key(p, e)} undefined on {e2!r}")
                continue
            target = lg.labels.get((q, table[e2]))
            if target is None:
                report.problems.append(f"connection at {flag_key(p, e)} sends {e2!r} off star({q})")
                continue
            diff = tuple(x - y for x, y in zip(target, lg.labels[(p, e2)]))
            report.coefficients[(p, e, e2)] = _congruence_coefficient(diff, base)
    return report


def is_gkm(lg: LabeledGraph) -> tuple:
    """(True, None) if labels at each vertex are pairwise independent,
    else (False, (p, e, e2)) for the first dependent pair in sorted order."""
    for p in lg.graph.vertices:
        star = lg.graph.star(p)
        for i, e in enumerate(star):
            for e2 in star[i + 1 :]:
                if minors_vanish(lg.labels[(p, e)], lg.labels[(p, e2)]):
                    return False, (p, e, e2)
    return True, None


def integer_rank(vectors) -> int:
    """Rank over Q of a list of integer vectors (exact elimination)."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    rank = 0
    ncols = len(rows[0])
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                factor = rows[i][col] / rows[rank][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def rank_of_labels(lg: LabeledGraph) -> int:
    return integer_rank(list(lg.labels.values()))


def rank_at_vertex(lg: LabeledGraph, p: str) -> int:
    return integer_rank([lg.labels[(p, e)] for e in lg.graph.star(p)])


def validate_labeled_morphism(f: GraphMorphism, src: LabeledGraph, tgt: LabeledGraph) -> ValidationReport:
    """Identity-lattice morphism of labeled graphs.

    Checks the graph-morphism clauses, that the image is a regular subgraph,
    the commuting square between the two connections along every compact
    edge that maps to an edge, and equality of labels on flags mapping to flags.
    """
    report = validate_morphism(f)
    if not report.ok:
        return report
    vs, es, _ = f.image()
    image = f.target.subgraph(vs, es)
    valences = {len(image.star(v)) for v in image.vertices}
    if len(valences) > 1:
        report.add(f"image subgraph is not regular (valences {sorted(valences)})")
    g = src.graph
    for p, e in g.flags:
        img = f.flag_image(p, e)
        if isinstance(img, tuple):
            if src.labels[(p, e)] != tgt.labels.get(img):
                report.add(
                    f"label at {flag_key(p, e)} is {src.labels[(p, e)]}, "
                    f"image flag {flag_key(*img)} has {tgt.labels.get(img)}"
                )
    for p, e in g.compact_flags():
        kind, fe = f.edge_map[e]
        if kind != "edge":
            continue
        q = g.other_end(e, p)
        fp = f.vertex_map[p]
        for e2 in g.star(p):
            e3 = src.connection[(p, e)][e2]
            k2, x2 = f.edge_map[e2]
            k3, x3 = f.edge_map[e3]
            if k2 == "vertex":
                if k3 != "vertex" or x3 != f.vertex_map[q]:
                    report.add(f"square fails at {flag_key(p, e)} on collapsed edge {e2!r}")
                continue
            expected = tgt.connection.get((fp, fe), {}).get(x2)
            if k3 != "edge" or x3 != expected:
                report.add(
                    f"square fails at {flag_key(p, e)} on {e2!r}: "
                    f"f(conn(e2)) = {x3!r}, conn(f(e2)) = {expected!r}"
                )
    return report


def full_validation(lg: LabeledGraph) -> ValidationReport:
    """Graph, connection and congruence checks rolled into one report."""
    report = validate_graph(lg.graph)
    if not report.ok:
        return report
    report.extend(validate_connection(lg.graph, lg.connection))
    if not report.ok:
        return report
    for msg in validate_labels(lg).messages():
        report.add(msg)
    return report
