"""Equivariant cohomology of labeled graphs, Chern classes of leg bundles and
the Leray-Hirsch decomposition of classes on a projectivization.

A class is a choice of polynomial at every vertex such that the values at
the two ends of each compact edge differ by a multiple of the edge label.
Classes over the projectivization decompose uniquely as
``sum_k phi*(Q_k) * t**k`` with ``t`` the first Chern class of the
tautological line bundle and ``Q_k`` classes on the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .bundle import (
    CongruenceViolation,
    InternalInvariant,
    LegBundle,
    Projectivization,
    TautologicalBundle,
    projectivize,
    tautological,
)
from .labeled import LabeledGraph, is_gkm
from .poly import NotDivisible, Polynomial, PolyLike, divide_exact, elementary_symmetric

__all__ = [
    "CohomologyError",
    "CongruenceViolation",
    "NotInCohomology",
    "NotInFiberCohomology",
    "FiberIntegralityFailure",
    "NonGKMFiber",
    "NotGKM",
    "CohomologyClass",
    "ModuleDecomposition",
    "PresentationElement",
    "class_failures",
    "validate_class",
    "constant_class",
    "chern",
    "pullback_class",
    "c1_tautological",
    "bh_residue",
    "mu",
    "interpolate_fiber",
    "fiber_decompose",
    "decompose",
    "reduce_presentation",
    "presentation_multiply",
]


class CohomologyError(ValueError):
    pass


class NotInCohomology(CongruenceViolation):
    """A class on the projectivization fails a congruence."""


class NotInFiberCohomology(CohomologyError):
    def __init__(self, message, pair=None, witness=None):
        self.pair = pair
        self.witness = witness
        super().__init__(message)


class FiberIntegralityFailure(NotInFiberCohomology):
    """Fiber congruences hold, but an elimination step has no integral quotient.

    Only possible when some difference of leg labels is not primitive.
    """


class NonGKMFiber(CohomologyError):
    pass


class NotGKM(CohomologyError):
    def __init__(self, witness):
        self.witness = witness
        p, e, e2 = witness
        super().__init__(f"projectivization is not GKM: labels of {e!r} and {e2!r} at {p!r} are dependent")


def _as_value(x, nvars: int) -> Polynomial:
    if isinstance(x, Polynomial):
        if x.nvars != nvars:
            raise CohomologyError(f"value has {x.nvars} variables, carrier rank is {nvars}")
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Polynomial.constant(x, nvars)
    raise TypeError(f"cannot use {x!r} as a class value")


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    """Vertex-wise polynomial values on a labeled graph.

    Construction does not check congruences; use :func:`validate_class`.
    Sums and products of valid classes are valid.
    """

    carrier: LabeledGraph
    values: Mapping[str, Polynomial]

    def __post_init__(self):
        n = self.carrier.rank
        verts = self.carrier.graph.vertices
        if set(self.values) != set(verts):
            raise CohomologyError(f"class values given on {sorted(self.values)}, carrier vertices are {list(verts)}")
        object.__setattr__(self, "values", {v: _as_value(self.values[v], n) for v in verts})

    def __getitem__(self, v: str) -> Polynomial:
        return self.values[v]

    @property
    def nvars(self) -> int:
        return self.carrier.rank

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.values.values())

    def _other(self, other):
        if isinstance(other, CohomologyClass):
            if other.carrier is not self.carrier and other.carrier != self.carrier:
                raise CohomologyError("classes live on different labeled graphs")
            return other.values
        if isinstance(other, (int, Polynomial)) and not isinstance(other, bool):
            c = _as_value(other, self.nvars)
            return {v: c for v in self.values}
        return None

    def _combine(self, other, op):
        vals = self._other(other)
        if vals is None:
            return NotImplemented
        return CohomologyClass(self.carrier, {v: op(x, vals[v]) for v, x in self.values.items()})

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return CohomologyClass(self.carrier, {v: -x for v, x in self.values.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return CohomologyClass(self.carrier, {v: x**k for v, x in self.values.items()})

    def __eq__(self, other):
        vals = self._other(other) if isinstance(other, (CohomologyClass, int, Polynomial)) else None
        if vals is None:
            return NotImplemented
        return all(x == vals[v] for v, x in self.values.items())

    __hash__ = None

    def format(self, names=None) -> dict:
        return {v: x.format(names) for v, x in self.values.items()}

    def to_json(self) -> dict:
        return {"values": {v: x.to_json() for v, x in self.values.items()}}

    @classmethod
    def from_json(cls, data: Mapping, carrier: LabeledGraph) -> "CohomologyClass":
        vals = data["values"]
        if not isinstance(vals, Mapping):
            raise ValueError('"values" must map vertex ids to polynomials')
        return cls(carrier, {v: Polynomial.from_json(x, carrier.rank) for v, x in vals.items()})


def constant_class(carrier: LabeledGraph, c: PolyLike | int = 1) -> CohomologyClass:
    value = _as_value(c, carrier.rank) if not isinstance(c, tuple) else Polynomial.linear(c)
    return CohomologyClass(carrier, {v: value for v in carrier.graph.vertices})


def class_failures(lg: LabeledGraph, values: Mapping[str, Polynomial]) -> list:
    """List of (p, e, remainder) for compact edges whose congruence fails."""
    out = []
    g = lg.graph
    for e in g.compact_edges:
        p, q = g.edges[e]
        diff = values[p] - values[q]
        if diff.is_zero():
            continue
        try:
            divide_exact(diff, lg.labels[(p, e)])
        except NotDivisible as exc:
            out.append((p, e, exc.remainder if exc.remainder else diff))
    return out


def validate_class(lg: LabeledGraph, f, _error=CongruenceViolation) -> CohomologyClass:
    """Check the edge congruences of ``f`` (a mapping or a class) on ``lg``."""
    values = f.values if isinstance(f, CohomologyClass) else f
    cls = CohomologyClass(lg, dict(values))
    failures = class_failures(lg, cls.values)
    if failures:
        p, e, witness = failures[0]
        err = _error(
            (p, e),
            witness,
            failures,
            f"class fails the congruence along {e!r}: f({p}) - f({lg.graph.other_end(e, p)}) "
            f"leaves remainder {witness} modulo {lg.label_poly(p, e)}",
        )
        err.failures = failures
        raise err
    return cls


def _projectivization(x) -> Projectivization:
    if isinstance(x, Projectivization):
        return x
    if isinstance(x, LegBundle):
        cached = x.__dict__.get("_projectivization")
        if cached is None:
            cached = projectivize(x)
            object.__setattr__(x, "_projectivization", cached)
        return cached
    raise TypeError(f"expected a LegBundle or Projectivization, got {type(x).__name__}")


def _bundle(x) -> LegBundle:
    return x.bundle if isinstance(x, Projectivization) else x


def chern(xi: LegBundle, k: int) -> CohomologyClass:
    """k-th equivariant Chern class: the k-th elementary symmetric
    polynomial in the leg labels at each vertex."""
    xi = _bundle(xi)
    if not isinstance(k, int) or not 0 <= k <= xi.rank:
        raise CohomologyError(f"Chern class index {k} out of range 0..{xi.rank}")
    n = xi.base.rank
    values = {p: elementary_symmetric(k, ws, nvars=n) for p, ws in xi.fibers.items()}
    try:
        return validate_class(xi.base, values)
    except CongruenceViolation as exc:
        raise InternalInvariant(f"c_{k} is not a class: {exc}") from exc


def pullback_class(P, f: CohomologyClass) -> CohomologyClass:
    """phi*(f): the value f(p) at every vertex over p."""
    P = _projectivization(P)
    vmap = P.projection.vertex_map
    return CohomologyClass(P.total, {v: f.values[vmap[v]] for v in P.total.graph.vertices})


def c1_tautological(gamma) -> CohomologyClass:
    """The class t: the first Chern class of the tautological line bundle.

    Accepts the tautological bundle, a projectivization or a leg bundle.
    """
    if not isinstance(gamma, TautologicalBundle):
        P = _projectivization(gamma)
        cached = P.__dict__.get("_tautological")
        if cached is None:
            cached = tautological(P)
            object.__setattr__(P, "_tautological", cached)
        gamma = cached
    return chern(gamma, 1)


def _t(P: Projectivization) -> CohomologyClass:
    cached = P.__dict__.get("_t")
    if cached is None:
        cached = c1_tautological(P)
        object.__setattr__(P, "_t", cached)
    return cached


def bh_residue(xi, t: CohomologyClass | None = None) -> CohomologyClass:
    """sum_k (-1)^k phi*(c_k) t^(R-k) on the projectivization, R the rank.

    This vanishes identically; it is returned so callers can check that.
    """
    P = _projectivization(xi)
    xi = P.bundle
    R = xi.rank
    if t is None:
        t = _t(P)
    total = constant_class(P.total, 0)
    for k in range(R + 1):
        term = pullback_class(P, chern(xi, k)) * t ** (R - k)
        total = total + term if k % 2 == 0 else total - term
    return total


def mu(xi, Q: Sequence[CohomologyClass]) -> CohomologyClass:
    """sum_k phi*(Q_k) * t^k. ``Q`` may be longer than the rank."""
    P = _projectivization(xi)
    t = _t(P)
    out = constant_class(P.total, 0)
    power = constant_class(P.total, 1)
    for k, q in enumerate(Q):
        if k:
            power = power * t
        if isinstance(q, CohomologyClass) and q.carrier is not P.base and q.carrier != P.base:
            raise CohomologyError(f"Q[{k}] does not live on the base graph")
        out = out + pullback_class(P, q if isinstance(q, CohomologyClass) else constant_class(P.base, q)) * power
    return out


def interpolate_fiber(weights: Sequence, values: Sequence[Polynomial], nvars: int | None = None) -> list:
    """Coefficients c_0..c_{R-1} with values[i] == sum_k c_k * weights[i]**k.

    Newton elimination: subtract the value at the first leg, divide the rest
    by the difference of labels, and repeat on the remaining legs. Each
    division is exact division in Z[t]. Raises NonGKMFiber on equal labels,
    NotInFiberCohomology if a fiber congruence fails and
    FiberIntegralityFailure if congruences hold but a quotient is not integral.
    """
    R = len(weights)
    if len(values) != R:
        raise CohomologyError(f"{len(values)} values for {R} legs")
    ws = [w if isinstance(w, Polynomial) else Polynomial.linear(w) for w in weights]
    if nvars is None:
        nvars = ws[0].nvars if ws else (values[0].nvars if values else 0)
    vals = [_as_value(x, nvars) for x in values]
    for i in range(R):
        for j in range(i + 1, R):
            if ws[i] == ws[j]:
                raise NonGKMFiber(f"legs {i + 1} and {j + 1} carry the same label {ws[i]}")
    for i in range(R):
        for j in range(i + 1, R):
            diff = vals[i] - vals[j]
            if diff.is_zero():
                continue
            try:
                divide_exact(diff, ws[i] - ws[j])
            except NotDivisible as exc:
                raise NotInFiberCohomology(
                    f"X({i + 1}) - X({j + 1}) is not divisible by {ws[i] - ws[j]}",
                    pair=(i, j),
                    witness=exc.remainder if exc.remainder else diff,
                ) from exc
    newton = []
    cur = vals
    for j in range(R):
        d = cur[j]
        newton.append(d)
        nxt = list(cur)
        for i in range(j + 1, R):
            try:
                nxt[i] = divide_exact(cur[i] - d, ws[i] - ws[j])
            except NotDivisible as exc:
                raise FiberIntegralityFailure(
                    f"elimination step {j + 1} has no integral quotient at leg {i + 1}",
                    pair=(j, i),
                    witness=exc.remainder if exc.remainder else cur[i] - d,
                ) from exc
        cur = nxt
    # expand sum_j d_j prod_{q<j} (t - w_q) in powers of t
    zero = Polynomial.zero(nvars)
    coeffs = [zero] * R
    basis = [Polynomial.one(nvars)]
    for j, d in enumerate(newton):
        for k, b in enumerate(basis):
            coeffs[k] = coeffs[k] + d * b
        if j + 1 < R:
            nb = [zero] * (len(basis) + 1)
            for k, b in enumerate(basis):
                nb[k + 1] = nb[k + 1] + b
                nb[k] = nb[k] - ws[j] * b
            basis = nb
    return coeffs


def fiber_decompose(P, p: str, X) -> list:
    """Coefficients Q_0(p)..Q_{R-1}(p) of a fiber class in powers of t_p.

    ``X`` maps the fiber vertices over ``p`` to polynomials, or is a class on
    the whole projectivization.
    """
    P = _projectivization(P)
    verts = P.fiber_vertices(p)
    vals = X.values if isinstance(X, CohomologyClass) else X
    missing = [v for v in verts if v not in vals]
    if missing:
        raise CohomologyError(f"fiber values missing at {missing}")
    return interpolate_fiber(P.bundle.fibers[p], [vals[v] for v in verts], P.base.rank)


@dataclass(frozen=True, eq=False)
class ModuleDecomposition:
    projectivization: Projectivization
    Q: tuple

    def __eq__(self, other):
        if isinstance(other, ModuleDecomposition):
            other = other.Q
        other = tuple(other)
        return len(other) == len(self.Q) and all(a == b for a, b in zip(self.Q, other))

    __hash__ = None

    def __getitem__(self, k):
        return self.Q[k]

    def __len__(self):
        return len(self.Q)

    def __iter__(self):
        return iter(self.Q)

    def to_json(self) -> dict:
        return {"Q": [q.to_json() for q in self.Q]}


def decompose(xi, f: CohomologyClass) -> ModuleDecomposition:
    """Unique base classes Q_0..Q_{R-1} with mu(Q) == f.

    Requires the projectivization to be GKM. The base congruences of each
    Q_k and the reassembly mu(Q) == f are checked, not assumed.
    """
    P = _projectivization(xi)
    ok, witness = is_gkm(P.total)
    if not ok:
        raise NotGKM(witness)
    f = validate_class(P.total, f, _error=NotInCohomology)
    R = P.rank
    per_vertex = {p: fiber_decompose(P, p, f) for p in P.base.graph.vertices}
    Q = []
    for k in range(R):
        values = {p: cs[k] for p, cs in per_vertex.items()}
        try:
            Q.append(validate_class(P.base, values))
        except CongruenceViolation as exc:
            raise InternalInvariant(f"Q_{k} is not a class on the base: {exc}") from exc
    if mu(P, Q) != f:
        raise InternalInvariant("reassembled class differs from the input")
    return ModuleDecomposition(P, tuple(Q))


@dataclass(frozen=True, eq=False)
class PresentationElement:
    """sum_k coeffs[k] * kappa**k with base-class coefficients, kept reduced
    to exactly ``rank`` coefficients."""

    projectivization: Projectivization
    coeffs: tuple

    def __eq__(self, other):
        if not isinstance(other, PresentationElement):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __mul__(self, other):
        return presentation_multiply(self.projectivization, self, other)

    def to_json(self) -> dict:
        return {"kappa_coeffs": [c.to_json() for c in self.coeffs]}


def reduce_presentation(xi, coeffs: Sequence) -> PresentationElement:
    """Reduce a polynomial in kappa modulo sum_k (-1)^k c_k kappa^(R-k)."""
    P = _projectivization(xi)
    base = P.base
    R = P.rank
    cs = [c if isinstance(c, CohomologyClass) else constant_class(base, c) for c in coeffs]
    chern_classes = [chern(P.bundle, k) for k in range(R + 1)]
    while len(cs) > R:
        top = cs.pop()
        d = len(cs)  # degree of the popped coefficient
        # kappa^R = -sum_{k>=1} (-1)^k c_k kappa^(R-k)
        for k in range(1, R + 1):
            term = chern_classes[k] * top
            idx = d - k
            cs[idx] = cs[idx] + term if k % 2 == 1 else cs[idx] - term
    while len(cs) < R:
        cs.append(constant_class(base, 0))
    return PresentationElement(P, tuple(cs))


def presentation_multiply(xi, a, b) -> PresentationElement:
    P = _projectivization(xi)
    ac = a.coeffs if isinstance(a, PresentationElement) else tuple(a)
    bc = b.coeffs if isinstance(b, PresentationElement) else tuple(b)
    if not ac or not bc:
        return reduce_presentation(P, [])
    prod = [constant_class(P.base, 0) for _ in range(len(ac) + len(bc) - 1)]
    for i, x in enumerate(ac):
        for j, y in enumerate(bc):
            prod[i + j] = prod[i + j] + x * y
    return reduce_presentation(P, prod)
