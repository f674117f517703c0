"""Leg bundles over labeled graphs and the constructions built from them:
projectivization, fibers, pullback and the tautological line bundle.

Conventions
-----------
* ``rank`` is the number of legs per fiber (a "rank r+1" bundle in the
  usual indexing has ``rank == r + 1``).
* Leg ``i`` (0-based in Python, 1-based in ids and JSON) at vertex ``p`` has
  id ``l:p:i``. The transport along a compact base flag ``(p, e)`` is a tuple
  ``perm`` with leg ``i`` at ``p`` going to leg ``perm[i]`` at the other end.
* Projectivization vertices reuse the leg ids. Vertical edges are
  ``e:p:i:j`` with ``i < j``; the horizontal edge over a base edge ``f`` with
  ends ``(a, b)`` joining legs ``i`` at ``a`` and ``j`` at ``b`` is ``e:f:i:j``.
  For rank one the projectivization is the base itself, ids included.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Mapping, Sequence

from .graph import Graph, GraphMorphism, natural_key, validate_graph
from .labeled import (
    CongruenceReport,
    LabeledGraph,
    flag_key,
    full_validation,
    is_gkm,
    parse_flag_key,
    validate_connection,
    validate_labeled_morphism,
    validate_labels,
)
from .poly import linear_form, linear_multiple

__all__ = [
    "BundleError",
    "CongruenceViolation",
    "TransportNotInverse",
    "TransportInferenceError",
    "GenerationFailed",
    "InvalidMorphism",
    "DegenerateFiber",
    "InternalInvariant",
    "LegBundle",
    "TautologicalBundle",
    "Projectivization",
    "leg_id",
    "build_leg_bundle",
    "infer_transport",
    "random_leg_bundle",
    "projectivize",
    "fiber",
    "is_face",
    "pullback",
    "tautological",
    "projection_morphism",
    "section_morphism",
]


class BundleError(ValueError):
    pass


class CongruenceViolation(BundleError):
    def __init__(self, flag, witness, report=None, message=None):
        self.flag = flag
        self.witness = witness
        self.report = report
        super().__init__(message or f"congruence relation fails at {flag}: witness {witness}")


class TransportNotInverse(BundleError):
    pass


class TransportInferenceError(BundleError):
    pass


class GenerationFailed(BundleError):
    pass


class InvalidMorphism(BundleError):
    pass


class DegenerateFiber(BundleError):
    """Two legs of one fiber carry the same label, so a vertical label would be zero."""


class InternalInvariant(RuntimeError):
    """A constructed object failed a check that theory guarantees."""


def leg_id(p: str, i: int) -> str:
    return f"l:{p}:{i + 1}"


@dataclass(frozen=True, eq=False)
class LegBundle:
    base: LabeledGraph
    fibers: Mapping[str, tuple]
    transport: Mapping[tuple, tuple]
    total: LabeledGraph
    report: CongruenceReport = field(repr=False, default=None)

    @property
    def rank(self) -> int:
        return len(next(iter(self.fibers.values()))) if self.fibers else 0

    @property
    def lattice_rank(self) -> int:
        return self.base.rank

    def leg(self, p: str, i: int) -> str:
        return leg_id(p, i)

    def weight(self, p: str, i: int) -> tuple:
        return self.fibers[p][i]

    def weights(self, p: str) -> tuple:
        return self.fibers[p]

    def __eq__(self, other):
        if not isinstance(other, LegBundle):
            return NotImplemented
        return (
            self.base == other.base
            and dict(self.fibers) == dict(other.fibers)
            and dict(self.transport) == dict(other.transport)
        )

    __hash__ = None

    def to_json(self) -> dict:
        base = self.base.to_json()
        return {
            "base": base,
            "fibers": {p: [list(w) for w in self.fibers[p]] for p in self.base.graph.vertices},
            "transport": {
                flag_key(p, e): [j + 1 for j in self.transport[(p, e)]]
                for p, e in self.base.graph.compact_flags()
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LegBundle":
        base = LabeledGraph.from_json(data["base"])
        fibers = {}
        for p, ws in data["fibers"].items():
            fibers[p] = [linear_form(w) for w in ws]
        raw = data.get("transport", "infer")
        if raw == "infer":
            transport = infer_transport(base, fibers)
        else:
            transport = {}
            for key, perm in raw.items():
                if not isinstance(perm, list) or any(not isinstance(x, int) for x in perm):
                    raise ValueError(f"transport at {key!r} must be a list of 1-based leg indices")
                transport[parse_flag_key(key)] = tuple(x - 1 for x in perm)
        return build_leg_bundle(base, fibers, transport)


@dataclass(frozen=True, eq=False)
class TautologicalBundle(LegBundle):
    projectivization: "Projectivization" = field(default=None, repr=False)


def _check_base(base: LabeledGraph) -> None:
    report = full_validation(base)
    if not report.ok:
        raise BundleError("base is not a valid labeled graph: " + "; ".join(report.errors))
    if not base.graph.is_compact_graph():
        raise BundleError("base graph must be compact (no legs)")


def _normalize_fibers(base: LabeledGraph, leg_labels: Mapping[str, Sequence]) -> dict:
    verts = base.graph.vertices
    if set(leg_labels) != set(verts):
        raise BundleError(f"fibers given for {sorted(leg_labels)}, base vertices are {list(verts)}")
    fibers = {p: tuple(linear_form(w) for w in leg_labels[p]) for p in verts}
    sizes = {len(ws) for ws in fibers.values()}
    if len(sizes) > 1:
        raise BundleError(f"fibers have different sizes {sorted(sizes)}")
    for p, ws in fibers.items():
        for w in ws:
            if len(w) != base.rank:
                raise BundleError(f"leg label {w} at {p!r} has length != lattice rank {base.rank}")
    return fibers


def _assemble_total(base: LabeledGraph, fibers: dict, transport: dict) -> LabeledGraph:
    g = base.graph
    edges = dict(g.edges)
    labels = dict(base.labels)
    for p, ws in fibers.items():
        for i, w in enumerate(ws):
            edges[leg_id(p, i)] = (p,)
            labels[(p, leg_id(p, i))] = w
    conn = {}
    for p, e in g.compact_flags():
        q = g.other_end(e, p)
        table = dict(base.connection[(p, e)])
        for i, j in enumerate(transport[(p, e)]):
            table[leg_id(p, i)] = leg_id(q, j)
        conn[(p, e)] = table
    return LabeledGraph(Graph(g.vertices, edges), base.rank, labels, conn)


def build_leg_bundle(
    base: LabeledGraph,
    leg_labels: Mapping[str, Sequence],
    leg_transport: Mapping[tuple, Sequence[int]] | None = None,
) -> LegBundle:
    """Attach labeled legs to every vertex of ``base`` and validate the result.

    ``leg_transport`` may be omitted when the rank is at most one.
    """
    _check_base(base)
    fibers = _normalize_fibers(base, leg_labels)
    rank = len(next(iter(fibers.values()))) if fibers else 0
    g = base.graph
    if leg_transport is None:
        if rank > 1:
            raise BundleError("leg_transport is required for rank > 1 (see infer_transport)")
        leg_transport = {flag: tuple(range(rank)) for flag in g.compact_flags()}
    transport = {}
    for p, e in g.compact_flags():
        perm = leg_transport.get((p, e))
        if perm is None:
            raise BundleError(f"transport missing at {flag_key(p, e)}")
        perm = tuple(perm)
        if sorted(perm) != list(range(rank)):
            raise BundleError(f"transport at {flag_key(p, e)} is not a permutation of {rank} legs: {perm}")
        transport[(p, e)] = perm
    extra = set(leg_transport) - set(transport)
    if extra:
        raise BundleError(f"transport given at non-compact or unknown flags {sorted(extra)}")
    for p, e in g.compact_flags():
        q = g.other_end(e, p)
        there, back = transport[(p, e)], transport[(q, e)]
        for i in range(rank):
            if back[there[i]] != i:
                raise TransportNotInverse(
                    f"transport at {flag_key(q, e)} is not inverse to {flag_key(p, e)} "
                    f"(leg {i + 1} -> {there[i] + 1} -> {back[there[i]] + 1})"
                )
    total = _assemble_total(base, fibers, transport)
    conn_report = validate_connection(total.graph, total.connection)
    if not conn_report.ok:
        raise TransportNotInverse("; ".join(conn_report.errors))
    report = validate_labels(total)
    if report.problems:
        raise BundleError("; ".join(report.problems))
    if report.failures:
        (p, e, e2), witness = report.failures[0]
        raise CongruenceViolation(
            (p, e),
            witness,
            report,
            f"congruence relation fails along {flag_key(p, e)} for {e2!r}: witness {witness}",
        )
    return LegBundle(base, fibers, transport, total, report)


def _matchings(base: LabeledGraph, fibers: dict, p: str, e: str) -> list:
    g = base.graph
    q = g.other_end(e, p)
    mod = base.labels[(p, e)]
    wp, wq = fibers[p], fibers[q]
    rank = len(wp)
    ok = [
        [linear_multiple(tuple(x - y for x, y in zip(wq[j], wp[i])), mod) is not None for j in range(rank)]
        for i in range(rank)
    ]
    return [perm for perm in permutations(range(rank)) if all(ok[i][perm[i]] for i in range(rank))]


def infer_transport(base: LabeledGraph, leg_labels: Mapping[str, Sequence]) -> dict:
    """The unique leg transport satisfying the congruence relations.

    Raises TransportInferenceError when some edge admits no matching or more
    than one.
    """
    fibers = _normalize_fibers(base, leg_labels)
    g = base.graph
    transport = {}
    for e in g.compact_edges:
        p, q = g.edges[e]
        found = _matchings(base, fibers, p, e)
        if len(found) != 1:
            what = "no" if not found else f"{len(found)}"
            raise TransportInferenceError(f"{what} congruence-compatible leg matchings along {e!r}")
        perm = found[0]
        transport[(p, e)] = perm
        inv = [0] * len(perm)
        for i, j in enumerate(perm):
            inv[j] = i
        transport[(q, e)] = tuple(inv)
    return transport


def _random_vector(rng: random.Random, n: int, bound: int) -> tuple:
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v):
            return v


def random_leg_bundle(
    base: LabeledGraph,
    rank: int,
    seed=None,
    *,
    twist: bool = True,
    permute: bool = True,
    weight_bound: int = 3,
    twist_bound: int = 2,
    gkm: bool = False,
    max_tries: int = 2000,
) -> LegBundle:
    """Seeded random leg bundle over a compact base.

    Root fibers get random weights; along a spanning forest each leg is
    carried over (optionally through a random permutation) and shifted by a
    random multiple of the edge label. Twists become rarer as draws are
    rejected, so the search ends at a product-like bundle at worst. Remaining edges must then admit a
    congruence-compatible matching, otherwise the draw is rejected. Fibers
    with repeated labels are rejected too. With ``gkm=True`` draws whose
    projectivization is not GKM are rejected as well.
    """
    _check_base(base)
    rng = random.Random(seed)
    g = base.graph
    n = base.rank
    if rank == 0:
        return build_leg_bundle(base, {p: [] for p in g.vertices})
    for attempt in range(max_tries):
        # twist every tree edge at first, fewer after repeated rejections; an
        # untwisted draw always closes up around cycles
        twist_prob = max(0.0, 1.0 - attempt / 50) if twist else 0.0
        fibers: dict = {}
        transport: dict = {}
        tree_edges = set()
        failed = False
        for root in g.vertices:
            if root in fibers:
                continue
            fibers[root] = [_random_vector(rng, n, weight_bound) for _ in range(rank)]
            queue = deque([root])
            while queue and not failed:
                p = queue.popleft()
                for e in g.star(p):
                    q = g.other_end(e, p)
                    if q in fibers:
                        continue
                    perm = list(range(rank))
                    if permute:
                        rng.shuffle(perm)
                    alpha = base.labels[(p, e)]
                    ws = [None] * rank
                    for i in range(rank):
                        c = rng.randint(-twist_bound, twist_bound) if rng.random() < twist_prob else 0
                        w = tuple(x + c * a for x, a in zip(fibers[p][i], alpha))
                        if not any(w):
                            failed = True
                        ws[perm[i]] = w
                    fibers[q] = ws
                    tree_edges.add(e)
                    transport[(p, e)] = tuple(perm)
                    inv = [0] * rank
                    for i, j in enumerate(perm):
                        inv[j] = i
                    transport[(q, e)] = tuple(inv)
                    queue.append(q)
        if failed:
            continue
        if any(len(set(ws)) < len(ws) for ws in fibers.values()):
            continue
        for e in g.compact_edges:
            if e in tree_edges:
                continue
            p, q = g.edges[e]
            found = _matchings(base, fibers, p, e)
            if not found:
                failed = True
                break
            perm = found[0]
            transport[(p, e)] = perm
            inv = [0] * rank
            for i, j in enumerate(perm):
                inv[j] = i
            transport[(q, e)] = tuple(inv)
        if failed:
            continue
        xi = build_leg_bundle(base, fibers, transport)
        if gkm and not is_gkm(projectivize(xi).total)[0]:
            continue
        return xi
    raise GenerationFailed(f"no valid rank-{rank} bundle after {max_tries} draws")


@dataclass(frozen=True, eq=False)
class Projectivization:
    bundle: LegBundle
    total: LabeledGraph
    classification: Mapping[str, str]
    vertex_fiber: Mapping[str, tuple]
    projection: GraphMorphism

    def __eq__(self, other):
        if not isinstance(other, Projectivization):
            return NotImplemented
        return self.bundle == other.bundle and self.total == other.total

    __hash__ = None

    @property
    def base(self) -> LabeledGraph:
        return self.bundle.base

    @property
    def rank(self) -> int:
        return self.bundle.rank

    def vertex(self, p: str, i: int) -> str:
        return p if self.bundle.rank == 1 else leg_id(p, i)

    def fiber_vertices(self, p: str) -> list:
        if not self.base.graph.has_vertex(p):
            from .graph import UnknownVertex

            raise UnknownVertex(p)
        return [self.vertex(p, i) for i in range(self.bundle.rank)]

    def weight_at(self, v: str) -> tuple:
        """Leg label of the leg that the vertex ``v`` stands for."""
        p, i = self.vertex_fiber[v]
        return self.bundle.fibers[p][i]

    def is_gkm(self) -> tuple:
        return is_gkm(self.total)

    def to_json(self) -> dict:
        doc = {
            "graph": self.total.to_json(),
            "classification": dict(self.classification),
            "projection": {
                "vertices": dict(self.projection.vertex_map),
                "edges": {e: x for e, (_, x) in self.projection.edge_map.items()},
            },
            "gkm": self.is_gkm()[0],
            "bundle": self.bundle.to_json(),
        }
        return doc

    @classmethod
    def from_json(cls, data: Mapping) -> "Projectivization":
        P = projectivize(LegBundle.from_json(data["bundle"]))
        if "graph" in data and LabeledGraph.from_json(data["graph"]) != P.total:
            raise ValueError("stored projectivization graph does not match its bundle")
        return P


def projectivize(xi: LegBundle) -> Projectivization:
    """Projectivization with its canonical connection and labels, validated."""
    R = xi.rank
    if R < 1:
        raise BundleError("projectivization needs rank >= 1")
    base = xi.base
    g = base.graph
    for p, ws in xi.fibers.items():
        if len(set(ws)) < len(ws):
            raise DegenerateFiber(f"fiber at {p!r} has repeated leg labels {ws}")
    clash = set(g.vertices) & set(g.edges)
    if clash:
        raise BundleError(f"ids used for both vertices and edges: {sorted(clash)}")
    sigma = xi.transport

    def vid(p, i):
        return p if R == 1 else leg_id(p, i)

    def ver(p, i, j):
        i, j = min(i, j), max(i, j)
        return f"e:{p}:{i + 1}:{j + 1}"

    def hor(f, p, i):
        if R == 1:
            return f
        a, b = g.edges[f]
        if p == a:
            ia, ib = i, sigma[(a, f)][i]
        else:
            ib, ia = i, sigma[(b, f)][i]
        return f"e:{f}:{ia + 1}:{ib + 1}"

    edges: dict = {}
    classification: dict = {}
    vertex_fiber: dict = {}
    labels: dict = {}
    for p in g.vertices:
        for i in range(R):
            vertex_fiber[vid(p, i)] = (p, i)
            for j in range(i + 1, R):
                eid = ver(p, i, j)
                edges[eid] = (vid(p, i), vid(p, j))
                classification[eid] = "vertical"
    for f in g.compact_edges:
        a, b = g.edges[f]
        for i in range(R):
            eid = hor(f, a, i)
            edges[eid] = (vid(a, i), vid(b, sigma[(a, f)][i]))
            classification[eid] = "horizontal"

    w = xi.fibers
    connection: dict = {}
    for p in g.vertices:
        for i in range(R):
            v = vid(p, i)
            for j in range(R):
                if j == i:
                    continue
                diff = tuple(x - y for x, y in zip(w[p][i], w[p][j]))
                labels[(v, ver(p, i, j))] = diff
                table = {}
                for k in range(R):
                    if k == i:
                        continue
                    table[ver(p, i, k)] = ver(p, j, i) if k == j else ver(p, j, k)
                for f in g.star(p):
                    table[hor(f, p, i)] = hor(f, p, j)
                connection[(v, ver(p, i, j))] = table
            for f in g.star(p):
                q = g.other_end(f, p)
                s = sigma[(p, f)]
                j = s[i]
                labels[(v, hor(f, p, i))] = base.labels[(p, f)]
                table = {}
                for k in range(R):
                    if k != i:
                        table[ver(p, i, k)] = ver(q, j, s[k])
                for gg in g.star(p):
                    h = base.connection[(p, f)][gg]
                    table[hor(gg, p, i)] = hor(h, q, j)
                connection[(v, hor(f, p, i))] = table

    total = LabeledGraph(Graph(list(vertex_fiber), edges), base.rank, labels, connection)
    report = full_validation(total)
    if not report.ok:
        raise InternalInvariant("projectivization is not a labeled graph: " + "; ".join(report.errors))
    projection = GraphMorphism(
        total.graph,
        g,
        {v: pi[0] for v, pi in vertex_fiber.items()},
        {
            e: ("vertex", vertex_fiber[ends[0]][0]) if classification[e] == "vertical" else ("edge", _base_edge(e, R))
            for e, ends in edges.items()
        },
    )
    return Projectivization(xi, total, classification, vertex_fiber, projection)


def _base_edge(eid: str, R: int) -> str:
    if R == 1:
        return eid
    # e:<f>:<i>:<j>; f may itself contain ':'
    return eid[2:].rsplit(":", 2)[0]


def is_face(lg: LabeledGraph, sub: Graph) -> bool:
    """True iff the connection of ``lg`` preserves the edge set of ``sub``
    along every compact flag of ``sub``."""
    sub_edges = set(sub.edges)
    for p, e in sub.compact_flags():
        table = lg.connection[(p, e)]
        for e2 in sub.star(p):
            if table[e2] not in sub_edges:
                return False
    return True


def fiber(P: Projectivization, p: str) -> LabeledGraph:
    """The labeled fiber subgraph over base vertex ``p``: a complete graph on
    the legs at ``p`` with the induced labels and connection."""
    verts = P.fiber_vertices(p)
    edges = [e for e, kind in P.classification.items() if kind == "vertical" and P.projection.edge_map[e][1] == p]
    sub = P.total.graph.subgraph(verts, edges)
    if not is_face(P.total, sub):
        raise InternalInvariant(f"fiber over {p!r} is not a face")
    labels = {flag: P.total.labels[flag] for flag in sub.flags}
    conn = {
        (v, e): {a: b for a, b in P.total.connection[(v, e)].items() if a in sub.edges}
        for v, e in sub.compact_flags()
    }
    return LabeledGraph(sub, P.total.rank, labels, conn)


def tautological(P: Projectivization) -> TautologicalBundle:
    """Line bundle over the projectivization whose leg at each vertex carries
    the label of the leg of the original bundle that the vertex stands for."""
    fibers = {v: [P.weight_at(v)] for v in P.total.graph.vertices}
    try:
        xi = build_leg_bundle(P.total, fibers)
    except BundleError as exc:
        raise InternalInvariant(f"tautological line bundle failed validation: {exc}") from exc
    return TautologicalBundle(xi.base, xi.fibers, xi.transport, xi.total, xi.report, projectivization=P)


def projection_morphism(xi: LegBundle) -> GraphMorphism:
    """Total graph to base: legs collapse onto their vertex."""
    g = xi.base.graph
    emap = {e: ("edge", e) for e in g.edges}
    for p, ws in xi.fibers.items():
        for i in range(len(ws)):
            emap[leg_id(p, i)] = ("vertex", p)
    return GraphMorphism(xi.total.graph, g, {v: v for v in g.vertices}, emap)


def section_morphism(xi: LegBundle) -> GraphMorphism:
    """Base into the total graph."""
    g = xi.base.graph
    return GraphMorphism(g, xi.total.graph, {v: v for v in g.vertices}, {e: ("edge", e) for e in g.edges})


def pullback(
    xi: LegBundle,
    phi,
    source: LabeledGraph | None = None,
    psi: Mapping[str, Sequence[int]] | None = None,
) -> LegBundle:
    """Pull ``xi`` back along a labeled-graph morphism ``phi: source -> base``.

    ``phi`` may be a :class:`Projectivization`, standing for its projection.
    ``psi[v][i]`` is the leg of the fiber over ``phi(v)`` that leg ``i`` at
    ``v`` corresponds to; it defaults to the index-preserving bijection.
    """
    if isinstance(phi, Projectivization):
        source = phi.total
        phi = phi.projection
    if source is None:
        raise InvalidMorphism("source labeled graph is required")
    if not source.graph.is_compact_graph():
        raise InvalidMorphism("pullback is only defined over compact graphs")
    report = validate_labeled_morphism(phi, source, xi.base)
    if not report.ok:
        raise InvalidMorphism("; ".join(report.errors))
    R = xi.rank
    g2 = source.graph
    psi = {v: tuple(psi[v]) if psi and v in psi else tuple(range(R)) for v in g2.vertices}
    for v, perm in psi.items():
        if sorted(perm) != list(range(R)):
            raise InvalidMorphism(f"psi at {v!r} is not a bijection of {R} legs")
    inv = {v: {j: i for i, j in enumerate(perm)} for v, perm in psi.items()}
    fibers = {v: [xi.fibers[phi.vertex_map[v]][psi[v][i]] for i in range(R)] for v in g2.vertices}
    transport = {}
    for v, e in g2.compact_flags():
        u = g2.other_end(e, v)
        kind, x = phi.edge_map[e]
        if kind == "edge":
            s = xi.transport[(phi.vertex_map[v], x)]
            transport[(v, e)] = tuple(inv[u][s[psi[v][i]]] for i in range(R))
        else:
            transport[(v, e)] = tuple(inv[u][psi[v][i]] for i in range(R))
    return build_leg_bundle(source, fibers, transport)
