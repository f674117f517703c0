"""Exact sparse multivariate polynomials over the integers.

All labels and cohomology values live in Z[t1, ..., tn]. A polynomial is a
map from exponent tuples to nonzero Python ints (arbitrary precision), tagged
with its number of variables ``nvars``. Instances are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Polynomial",
    "LinearForm",
    "PolynomialError",
    "RankMismatch",
    "NotDivisible",
    "ZeroDivisor",
    "linear_form",
    "elementary_symmetric",
    "complete_homogeneous",
    "divide_exact",
    "is_congruent_zero",
    "linear_multiple",
    "poly_arith",
]

Exponents = tuple
LinearForm = tuple  # tuple[int, ...], never all zero


class PolynomialError(ValueError):
    pass


class RankMismatch(PolynomialError):
    pass


class ZeroDivisor(PolynomialError):
    pass


class NotDivisible(PolynomialError):
    """Raised by :func:`divide_exact` when the quotient is not an integer polynomial.

    ``remainder`` is the nonzero remainder of division over Q. When the
    division is exact over Q but not over Z, ``remainder`` is zero and
    ``rational_quotient`` holds the offending quotient as a dict of Fractions.
    """

    def __init__(self, dividend, divisor, remainder, rational_quotient=None):
        self.dividend = dividend
        self.divisor = divisor
        self.remainder = remainder
        self.rational_quotient = rational_quotient
        super().__init__()

    def __str__(self):
        # formatted lazily: divisibility tests raise this in tight loops
        if self.remainder:
            return f"{self.dividend} is not divisible by {self.divisor}: remainder {self.remainder}"
        return f"{self.dividend} / {self.divisor} has non-integral coefficients"


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Immutable integer polynomial in ``nvars`` variables."""

    __slots__ = ("_terms", "_nvars", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None, nvars: int = 0):
        if nvars < 0:
            raise PolynomialError("nvars must be non-negative")
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(x) for x in exps)
            if len(exps) != nvars:
                raise RankMismatch(f"exponent vector {exps} has length != {nvars}")
            if any(x < 0 for x in exps):
                raise PolynomialError(f"negative exponent in {exps}")
            if isinstance(coeff, Fraction):
                if coeff.denominator != 1:
                    raise PolynomialError(f"non-integral coefficient {coeff}")
                coeff = coeff.numerator
            coeff = int(coeff)
            if coeff:
                clean[exps] = clean.get(exps, 0) + coeff
                if clean[exps] == 0:
                    del clean[exps]
        self._terms = clean
        self._nvars = nvars
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls({}, nvars)

    @classmethod
    def constant(cls, c: int, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        exps = [0] * nvars
        exps[i] = 1
        return cls({tuple(exps): 1}, nvars)

    @classmethod
    def linear(cls, coeffs: Sequence[int]) -> "Polynomial":
        """Degree-one polynomial sum(c_i t_i) for an integer vector."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                exps = [0] * n
                exps[i] = 1
                terms[tuple(exps)] = int(c)
        return cls(terms, n)

    # -- accessors ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self._nvars, 0)

    def as_linear_form(self) -> LinearForm:
        """Coefficient vector of a homogeneous degree-one polynomial."""
        vec = [0] * self._nvars
        for exps, c in self._terms.items():
            if sum(exps) != 1:
                raise PolynomialError(f"{self} is not a homogeneous linear form")
            vec[exps.index(1)] = c
        return tuple(vec)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._nvars != self._nvars:
                raise RankMismatch(f"rank {self._nvars} vs {other._nvars}")
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self._nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(out, self._nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({e: -c for e, c in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(out, self._nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("only non-negative integer powers")
        result = Polynomial.one(self._nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self._nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, point: Sequence[int]) -> int:
        total = 0
        for exps, c in self._terms.items():
            v = c
            for x, k in zip(point, exps):
                v *= x**k
            total += v
        return total

    # -- formatting / serialization ----------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"t{i + 1}" for i in range(self._nvars)]
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(exps) if k
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r}, nvars={self._nvars})"

    def to_json(self) -> list:
        return [{"coefficient": c, "exponents": list(e)} for e, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], nvars: int) -> "Polynomial":
        terms: dict = {}
        for term in data:
            exps = tuple(term["exponents"])
            if exps in terms:
                raise PolynomialError(f"duplicate exponent vector {list(exps)}")
            coeff = term["coefficient"]
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise PolynomialError(f"coefficient {coeff!r} is not an integer")
            terms[exps] = coeff
        return cls(terms, nvars)


PolyLike = Union[Polynomial, Sequence[int]]


def linear_form(coeffs: Iterable[int]) -> LinearForm:
    """Validate and freeze an integer vector used as a label."""
    vec = tuple(coeffs)
    for c in vec:
        if not isinstance(c, int) or isinstance(c, bool):
            raise PolynomialError(f"label entry {c!r} is not an integer")
    if not any(vec):
        raise ZeroDivisor("zero linear form")
    return vec


def _as_poly(x: PolyLike) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.linear(tuple(x))


def poly_arith(op: str, a: Polynomial, b: Polynomial | None = None) -> Polynomial:
    """Dispatch for ``add``, ``subtract``, ``multiply`` and ``negate``."""
    if op == "add":
        return a + b
    if op == "subtract":
        return a - b
    if op == "multiply":
        return a * b
    if op == "negate":
        return -a
    raise PolynomialError(f"unknown operation {op!r}")


def elementary_symmetric(k: int, forms: Sequence[PolyLike], nvars: int | None = None) -> Polynomial:
    """k-th elementary symmetric polynomial of the given forms.

    ``nvars`` is only needed when ``forms`` is empty.
    """
    polys = [_as_poly(f) for f in forms]
    if nvars is None:
        if not polys:
            raise PolynomialError("nvars required for an empty list of forms")
        nvars = polys[0].nvars
    if not 0 <= k <= len(polys):
        raise PolynomialError(f"k={k} out of range 0..{len(polys)}")
    # e_k via the recurrence e_k(x1..xm) = e_k(x1..x_{m-1}) + x_m e_{k-1}(x1..x_{m-1})
    e = [Polynomial.one(nvars)] + [Polynomial.zero(nvars)] * k
    for x in polys:
        for j in range(k, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[k]


def complete_homogeneous(k: int, forms: Sequence[PolyLike], nvars: int | None = None) -> Polynomial:
    """Complete homogeneous symmetric polynomial h_k: the sum of all degree-k
    monomials in ``forms``; h_0 = 1 and h_k(x) = x**k for a single form."""
    polys = [_as_poly(f) for f in forms]
    if nvars is None:
        if not polys:
            raise PolynomialError("nvars required for an empty list of forms")
        nvars = polys[0].nvars
    if k < 0:
        raise PolynomialError(f"k={k} must be non-negative")
    # h_k(x1..xm) = h_k(x1..x_{m-1}) + x_m h_{k-1}(x1..xm)
    h = [Polynomial.one(nvars)] + [Polynomial.zero(nvars)] * k
    for x in polys:
        for j in range(1, k + 1):
            h[j] = h[j] + x * h[j - 1]
    return h[k]


def divide_exact(f: Polynomial, ell: PolyLike) -> Polynomial:
    """Return q with f == q * ell, q in Z[t].

    ``ell`` is a nonzero linear form (vector or homogeneous degree-one
    polynomial). The first variable with nonzero coefficient is eliminated by
    division over Q, then the quotient is checked for integrality.
    """
    vec = ell.as_linear_form() if isinstance(ell, Polynomial) else tuple(ell)
    if not any(vec):
        raise ZeroDivisor("division by the zero linear form")
    if len(vec) != f.nvars:
        raise RankMismatch(f"rank {f.nvars} vs divisor rank {len(vec)}")
    n = f.nvars
    pivot = next(i for i, c in enumerate(vec) if c)
    a = vec[pivot]
    others = [(j, c) for j, c in enumerate(vec) if c and j != pivot]

    rem = {e: Fraction(c) for e, c in f.terms.items()}
    quot: dict = {}
    # Each step removes the term of highest pivot degree and only creates terms
    # of strictly lower pivot degree, so this terminates.
    while True:
        top = None
        for e in rem:
            if e[pivot] and (top is None or e[pivot] > top[pivot]):
                top = e
        if top is None:
            break
        qc = rem.pop(top) / a
        m = list(top)
        m[pivot] -= 1
        m = tuple(m)
        quot[m] = quot.get(m, 0) + qc
        for j, c in others:
            e = list(m)
            e[j] += 1
            e = tuple(e)
            v = rem.get(e, 0) - qc * c
            if v:
                rem[e] = v
            else:
                rem.pop(e, None)
    rem = {e: c for e, c in rem.items() if c}
    divisor = Polynomial.linear(vec)
    if rem:
        if all(c.denominator == 1 for c in rem.values()):
            witness = Polynomial(rem, n)
        else:
            # clear denominators so the witness stays an integer polynomial
            from math import lcm

            den = lcm(*(c.denominator for c in rem.values()))
            witness = Polynomial({e: c * den for e, c in rem.items()}, n)
        raise NotDivisible(f, divisor, witness)
    if any(c.denominator != 1 for c in quot.values()):
        raise NotDivisible(f, divisor, Polynomial.zero(n), rational_quotient=quot)
    return Polynomial(quot, n)


def is_congruent_zero(f: Polynomial, ell: PolyLike) -> bool:
    """True iff ``f`` is an integer multiple (in Z[t]) of the linear form ``ell``."""
    try:
        divide_exact(f, ell)
    except NotDivisible:
        return False
    return True


def linear_multiple(v: Sequence[int], ell: Sequence[int]):
    """Integer c with v == c * ell for integer vectors, else None.

    Same answer as dividing the linear polynomials with :func:`divide_exact`,
    without building polynomials.
    """
    pivot = next((i for i, x in enumerate(ell) if x), None)
    if pivot is None:
        raise ZeroDivisor("division by the zero linear form")
    if len(v) != len(ell):
        raise RankMismatch(f"rank {len(v)} vs divisor rank {len(ell)}")
    c, r = divmod(v[pivot], ell[pivot])
    if r:
        return None
    if any(x != c * y for x, y in zip(v, ell)):
        return None
    return c


def minors_vanish(u: Sequence[int], v: Sequence[int]) -> bool:
    """True iff every 2x2 minor of the pair is zero, i.e. u, v are dependent."""
    return all(u[i] * v[j] - u[j] * v[i] == 0 for i, j in combinations(range(len(u)), 2))
