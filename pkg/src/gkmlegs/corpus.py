"""Built-in example graphs and bundles."""

from __future__ import annotations

from .bundle import LegBundle, build_leg_bundle, random_leg_bundle
from .graph import Graph
from .labeled import LabeledGraph, two_valent_connection

__all__ = [
    "cp2_base",
    "square_base",
    "cp2_tangent",
    "cp2_sheared",
    "triangle_rank2_twisted",
    "edge_rank3",
    "random_example",
    "BUILTINS",
    "load_builtin",
]


def _two_valent(vertices, edges, labels, rank=2) -> LabeledGraph:
    g = Graph(vertices, edges)
    return LabeledGraph(g, rank, labels, two_valent_connection(g))


def cp2_base() -> LabeledGraph:
    """Triangle of the projective plane: p, q, r with edges e1 = pr, e2 = pq, e3 = qr."""
    return _two_valent(
        ["p", "q", "r"],
        {"e1": ("p", "r"), "e2": ("p", "q"), "e3": ("q", "r")},
        {
            ("p", "e1"): (1, 0),
            ("p", "e2"): (0, 1),
            ("q", "e2"): (0, -1),
            ("q", "e3"): (1, -1),
            ("r", "e1"): (-1, 0),
            ("r", "e3"): (-1, 1),
        },
    )


def square_base() -> LabeledGraph:
    """4-cycle of the product of two projective lines."""
    return _two_valent(
        ["a", "b", "c", "d"],
        {"ab": ("a", "b"), "bc": ("b", "c"), "cd": ("c", "d"), "da": ("d", "a")},
        {
            ("a", "ab"): (1, 0),
            ("a", "da"): (0, 1),
            ("b", "ab"): (-1, 0),
            ("b", "bc"): (0, 1),
            ("c", "bc"): (0, -1),
            ("c", "cd"): (-1, 0),
            ("d", "cd"): (1, 0),
            ("d", "da"): (0, -1),
        },
    )


_CP2_TANGENT_FIBERS = {
    "p": [(1, 0), (0, 1)],
    "q": [(0, -1), (1, -1)],
    "r": [(-1, 0), (-1, 1)],
}

_CP2_TANGENT_TRANSPORT = {
    ("p", "e1"): (0, 1),
    ("r", "e1"): (0, 1),
    ("p", "e2"): (1, 0),
    ("q", "e2"): (1, 0),
    ("q", "e3"): (0, 1),
    ("r", "e3"): (0, 1),
}


def cp2_tangent() -> LegBundle:
    """Tangent bundle of the projective plane as a rank-2 leg bundle."""
    return build_leg_bundle(cp2_base(), _CP2_TANGENT_FIBERS, _CP2_TANGENT_TRANSPORT)


def cp2_sheared() -> LegBundle:
    """Rank-2 bundle over the triangle with leg labels -2*beta, alpha-beta at q."""
    fibers = {
        "p": [(1, 0), (0, 1)],
        "q": [(0, -2), (1, -1)],
        "r": [(-2, 0), (-1, 1)],
    }
    return build_leg_bundle(cp2_base(), fibers, _CP2_TANGENT_TRANSPORT)


def triangle_rank2_twisted() -> LegBundle:
    """The tangent bundle data on a triangle with edges named f = pr, g = pq, h = qr."""
    ren = {"e1": "f", "e2": "g", "e3": "h"}
    base = cp2_base().relabel({v: v for v in "pqr"}, ren)
    transport = {(p, ren[e]): perm for (p, e), perm in _CP2_TANGENT_TRANSPORT.items()}
    return build_leg_bundle(base, _CP2_TANGENT_FIBERS, transport)


def edge_rank3() -> LegBundle:
    """Rank-3 bundle over a single edge (projective line)."""
    base = _two_valent(["p", "q"], {"f": ("p", "q")}, {("p", "f"): (1, 0), ("q", "f"): (-1, 0)})
    fibers = {"p": [(0, 1), (1, 3), (-1, 2)], "q": [(1, 1), (0, 3), (1, 2)]}
    transport = {("p", "f"): (0, 1, 2), ("q", "f"): (0, 1, 2)}
    return build_leg_bundle(base, fibers, transport)


def random_example(seed=0, rank=2, base: str = "cp2-base", **kw) -> LegBundle:
    bases = {"cp2-base": cp2_base, "square-base": square_base}
    return random_leg_bundle(bases[base](), rank, seed, **kw)


BUILTINS = {
    "cp2-base": cp2_base,
    "square-base": square_base,
    "cp2-tangent": cp2_tangent,
    "cp2-sheared": cp2_sheared,
    "triangle-rank2-twisted": triangle_rank2_twisted,
    "edge-rank3": edge_rank3,
    "random": random_example,
}


def load_builtin(name: str, seed=0, rank=2):
    if name not in BUILTINS:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    if name == "random":
        return random_example(seed=seed, rank=rank)
    return BUILTINS[name]()
