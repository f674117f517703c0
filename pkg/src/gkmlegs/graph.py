"""Graphs with legs: vertices, compact edges, non-compact edges (legs) and flags."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

__all__ = [
    "Graph",
    "GraphMorphism",
    "ValidationReport",
    "UnknownVertex",
    "natural_key",
    "validate_graph",
    "star",
    "is_regular",
    "validate_morphism",
    "compose",
    "identity_morphism",
]


class UnknownVertex(KeyError):
    pass


def natural_key(s: str):
    """Sort key that orders ``l:p:2`` before ``l:p:10``."""
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", s)]


def sort_ids(ids: Iterable[str]) -> list:
    return sorted(ids, key=natural_key)


@dataclass
class ValidationReport:
    """A list of violated clauses; empty means valid."""

    errors: list = field(default_factory=list)

    def add(self, msg: str) -> None:
        self.errors.append(msg)

    def extend(self, other: "ValidationReport") -> None:
        self.errors.extend(other.errors)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self):
        return iter(self.errors)

    def __len__(self):
        return len(self.errors)


@dataclass(frozen=True)
class Graph:
    """A finite graph whose edges have one end (legs) or two ends (compact).

    Flags are not stored; they are the (vertex, edge) pairs read off ``edges``.
    The constructor does not validate; use :func:`validate_graph`.
    """

    vertices: tuple
    edges: Mapping[str, tuple]

    def __init__(self, vertices: Iterable[str], edges: Mapping[str, Iterable[str]] | None = None):
        object.__setattr__(self, "vertices", tuple(sort_ids(vertices)))
        edges = edges or {}
        object.__setattr__(
            self, "edges", {e: tuple(edges[e]) for e in sort_ids(edges)}
        )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges.items())))

    @cached_property
    def _vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def _stars(self) -> dict:
        stars: dict = {v: [] for v in self.vertices}
        for e, ends in self.edges.items():
            for v in dict.fromkeys(ends):
                if v in stars:
                    stars[v].append(e)
        return {v: tuple(es) for v, es in stars.items()}

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def is_leg(self, e: str) -> bool:
        return len(self.edges[e]) == 1

    def is_compact(self, e: str) -> bool:
        return len(self.edges[e]) == 2

    @property
    def legs(self) -> list:
        return [e for e, ends in self.edges.items() if len(ends) == 1]

    @property
    def compact_edges(self) -> list:
        return [e for e, ends in self.edges.items() if len(ends) == 2]

    def is_compact_graph(self) -> bool:
        return not self.legs

    @property
    def flags(self) -> list:
        return [(v, e) for e, ends in self.edges.items() for v in ends]

    def compact_flags(self) -> list:
        """Flags (p, e) with e compact, in sorted order of p then e."""
        return [(p, e) for p in self.vertices for e in self.star(p) if self.is_compact(e)]

    def other_end(self, e: str, p: str) -> str:
        ends = self.edges[e]
        if len(ends) != 2 or p not in ends:
            raise ValueError(f"{p!r} is not an end of compact edge {e!r}")
        return ends[1] if ends[0] == p else ends[0]

    def star(self, p: str, filter: str = "all") -> tuple:
        if p not in self._stars:
            raise UnknownVertex(p)
        es = self._stars[p]
        if filter == "all":
            return es
        if filter == "legs":
            return tuple(e for e in es if self.is_leg(e))
        if filter == "compact":
            return tuple(e for e in es if self.is_compact(e))
        raise ValueError(f"unknown star filter {filter!r}")

    def valence(self, p: str) -> int:
        return len(self.star(p))

    def subgraph(self, vertices: Iterable[str], edges: Iterable[str]) -> "Graph":
        edges = list(edges)
        return Graph(vertices, {e: self.edges[e] for e in edges})

    # -- JSON ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e, "ends": list(ends)} for e, ends in self.edges.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        vertices = list(data["vertices"])
        edges: dict = {}
        for rec in data.get("edges", []):
            eid = rec["id"]
            if eid in edges:
                raise ValueError(f"duplicate edge id {eid!r}")
            edges[eid] = tuple(rec["ends"])
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex id")
        return cls(vertices, edges)


def validate_graph(g: Graph) -> ValidationReport:
    report = ValidationReport()
    if not g.vertices:
        report.add("vertex set is empty")
    for v in list(g.vertices) + list(g.edges):
        if not isinstance(v, str) or not v or "|" in v:
            report.add(f"id {v!r} must be a nonempty string without '|'")
    shared = set(g.vertices) & set(g.edges)
    for x in sort_ids(shared):
        report.add(f"id {x!r} is used both as a vertex and as an edge")
    for e, ends in g.edges.items():
        if len(ends) not in (1, 2):
            report.add(f"edge {e!r} has {len(ends)} ends; expected 1 (leg) or 2 (compact)")
            continue
        for v in ends:
            if not g.has_vertex(v):
                report.add(f"edge {e!r} ends at unknown vertex {v!r}")
        if len(ends) == 2 and ends[0] == ends[1]:
            report.add(f"compact edge {e!r} has both flags at vertex {ends[0]!r}")
    if g.edges:
        for v in g.vertices:
            if not g.star(v):
                report.add(f"vertex {v!r} carries no flag")
    return report


def star(g: Graph, p: str, filter: str = "all") -> tuple:
    return g.star(p, filter)


def is_regular(g: Graph, m: int) -> bool:
    return all(g.valence(p) == m for p in g.vertices)


@dataclass(frozen=True)
class GraphMorphism:
    """Graph morphism given by a vertex map and an edge map.

    ``edge_map[e]`` is ``("edge", id)`` or ``("vertex", id)``; the latter
    collapses ``e`` onto a vertex. The flag map is induced.
    """

    source: Graph
    target: Graph
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, tuple]

    def flag_image(self, p: str, e: str):
        """Image of flag (p, e): a target flag, or a vertex id for collapsed edges."""
        kind, x = self.edge_map[e]
        if kind == "vertex":
            return x
        return (self.vertex_map[p], x)

    def image(self) -> tuple:
        """(vertices, edges, flags) of the image subgraph."""
        vs = set(self.vertex_map.values())
        es = set()
        fs = set()
        for e, (kind, x) in self.edge_map.items():
            if kind == "vertex":
                vs.add(x)
            else:
                es.add(x)
                for p in self.source.edges[e]:
                    fs.add((self.vertex_map.get(p), x))
        return sort_ids(vs), sort_ids(es), sorted(fs, key=lambda f: (natural_key(f[0] or ""), natural_key(f[1])))

    def image_graph(self) -> Graph:
        vs, es, _ = self.image()
        return Graph(vs, {e: self.target.edges[e] for e in es if e in self.target.edges})


def validate_morphism(f: GraphMorphism) -> ValidationReport:
    report = ValidationReport()
    src, tgt = f.source, f.target
    for v in src.vertices:
        if v not in f.vertex_map:
            report.add(f"vertex {v!r} has no image")
        elif not tgt.has_vertex(f.vertex_map[v]):
            report.add(f"vertex {v!r} maps to {f.vertex_map[v]!r}, not a target vertex")
    for e, ends in src.edges.items():
        if e not in f.edge_map:
            report.add(f"edge {e!r} has no image")
            continue
        kind, x = f.edge_map[e]
        if kind == "vertex":
            if not tgt.has_vertex(x):
                report.add(f"edge {e!r} collapses to {x!r}, not a target vertex")
            for p in ends:
                if f.vertex_map.get(p) != x:
                    report.add(
                        f"edge {e!r} collapses to {x!r} but its end {p!r} maps to {f.vertex_map.get(p)!r}"
                    )
        elif kind == "edge":
            if x not in tgt.edges:
                report.add(f"edge {e!r} maps to {x!r}, not a target edge")
                continue
            tends = tgt.edges[x]
            if len(ends) == 2:
                if len(tends) != 2:
                    report.add(f"compact edge {e!r} maps to leg {x!r}")
                    continue
                images = [f.vertex_map.get(p) for p in ends]
                if images[0] == images[1] or set(images) != set(tends):
                    report.add(
                        f"flags of {e!r} at {list(ends)} map to {images}, "
                        f"not to the flags of {x!r} at {list(tends)}"
                    )
            else:
                if f.vertex_map.get(ends[0]) not in tends:
                    report.add(
                        f"leg {e!r} at {ends[0]!r} maps to {x!r}, "
                        f"which has no flag at {f.vertex_map.get(ends[0])!r}"
                    )
        else:
            report.add(f"edge {e!r} has image of unknown kind {kind!r}")
    return report


def identity_morphism(g: Graph) -> GraphMorphism:
    return GraphMorphism(
        g, g, {v: v for v in g.vertices}, {e: ("edge", e) for e in g.edges}
    )


def compose(second: GraphMorphism, first: GraphMorphism) -> GraphMorphism:
    """``second`` after ``first``."""
    vmap = {v: second.vertex_map[w] for v, w in first.vertex_map.items()}
    emap = {}
    for e, (kind, x) in first.edge_map.items():
        emap[e] = ("vertex", second.vertex_map[x]) if kind == "vertex" else second.edge_map[x]
    return GraphMorphism(first.source, second.target, vmap, emap)
