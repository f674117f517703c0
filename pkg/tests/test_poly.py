import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkmlegs.poly import (
    NotDivisible,
    Polynomial,
    RankMismatch,
    ZeroDivisor,
    complete_homogeneous,
    divide_exact,
    elementary_symmetric,
    is_congruent_zero,
    linear_form,
    linear_multiple,
    minors_vanish,
    poly_arith,
)

A = Polynomial.variable(0, 2)
B = Polynomial.variable(1, 2)


def polys(nvars=2, max_deg=4):
    term = st.tuples(st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars).map(tuple), st.integers(-20, 20))
    return st.lists(term, max_size=6).map(lambda ts: Polynomial(_merge(ts), nvars))


def _merge(ts):
    d = {}
    for e, c in ts:
        d[e] = d.get(e, 0) + c
    return d


linear = st.lists(st.integers(-6, 6), min_size=2, max_size=2).filter(any).map(tuple)


def test_arith_examples():
    assert poly_arith("add", A + B, -B) == A
    ab = poly_arith("multiply", A, B)
    assert ab.terms == {(1, 1): 1}
    assert poly_arith("multiply", A - B, A + B) == A**2 - B**2
    assert poly_arith("negate", A) == -A
    assert poly_arith("subtract", A, A).is_zero()


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        A + Polynomial.variable(0, 3)


def test_canonical_form_drops_zeros():
    p = Polynomial({(1, 0): 2, (0, 1): 0}, 2)
    assert p.terms == {(1, 0): 2}
    assert (A - A) == 0
    assert Polynomial.constant(3, 2) == 3


def test_format_and_order():
    p = B**2 - A * B + A**2 + 1
    assert p.format(["a", "b"]) == "a^2 - a*b + b^2 + 1"
    assert str(Polynomial.zero(2)) == "0"


def test_json_round_trip():
    p = 3 * A**2 * B - 7 + B
    assert Polynomial.from_json(p.to_json(), 2) == p


def test_elementary_symmetric_examples():
    a, b = (1, 0), (0, 1)
    assert elementary_symmetric(0, [a, b]) == 1
    assert elementary_symmetric(1, [a, b]) == A + B
    assert elementary_symmetric(2, [a, b]) == A * B
    with pytest.raises(ValueError):
        elementary_symmetric(3, [a, b])


def test_divide_exact_examples():
    assert divide_exact(A**2 - B**2, (1, -1)) == A + B
    assert divide_exact(3 * B, (0, 1)) == 3
    with pytest.raises(NotDivisible) as info:
        divide_exact(A, (0, 1))
    assert info.value.remainder == A
    with pytest.raises(ZeroDivisor):
        divide_exact(A, (0, 0))


def test_divide_exact_rational_only():
    # divisible over Q but not over Z: the witness is a rational quotient
    with pytest.raises(NotDivisible) as info:
        divide_exact(A, (2, 0))
    assert info.value.remainder == 0
    assert info.value.rational_quotient


def test_congruence_examples():
    assert is_congruent_zero(Polynomial.zero(2), (3, 1))
    assert is_congruent_zero(-2 * B, (0, 1))
    assert not is_congruent_zero(A - B, (1, 0))


def test_linear_form_rejects_zero_and_non_ints():
    with pytest.raises(ZeroDivisor):
        linear_form([0, 0])
    with pytest.raises(ValueError):
        linear_form([1.5, 0])


def test_linear_multiple_matches_divide_exact():
    rng = random.Random(3)
    for _ in range(500):
        v = tuple(rng.randint(-6, 6) for _ in range(3))
        ell = tuple(rng.randint(-3, 3) for _ in range(3))
        if not any(ell):
            continue
        c = linear_multiple(v, ell)
        ok = is_congruent_zero(Polynomial.linear(v), ell)
        assert (c is not None) == ok
        if ok:
            assert Polynomial.linear(v) == c * Polynomial.linear(ell)


def test_minors_vanish():
    assert minors_vanish((2, -4), (-1, 2))
    assert not minors_vanish((1, 0), (1, 1))


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f
    assert f * g == g * f
    assert f - f == 0


@settings(max_examples=80, deadline=None)
@given(polys(), linear)
def test_divide_exact_inverts_multiplication(f, ell):
    assert divide_exact(f * Polynomial.linear(ell), ell) == f


@settings(max_examples=60, deadline=None)
@given(st.lists(linear, min_size=1, max_size=5), st.data())
def test_newton_vieta(ws, data):
    # sum_k (-1)^k e_k(w) w_i^(R-k) vanishes at every root w_i
    R = len(ws)
    i = data.draw(st.integers(0, R - 1))
    wi = Polynomial.linear(ws[i])
    total = sum(
        ((-1) ** k * elementary_symmetric(k, ws) * wi ** (R - k) for k in range(R + 1)),
        Polynomial.zero(2),
    )
    assert total == 0


def _difference_identity(S, xs, k, m, n):
    lhs = S(k, xs[:m], n) - S(k, xs[: m - 1] + [xs[m]], n)
    rhs = (xs[m - 1] - xs[m]) * S(k - 1, xs[: m + 1], n)
    return lhs == rhs


def test_symmetric_difference_identity_complete_homogeneous():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(1, 3)
        xs = [Polynomial.linear([rng.randint(-4, 4) for _ in range(n)]) for _ in range(7)]
        for m in range(1, 7):
            for k in range(1, m + 1):
                assert _difference_identity(complete_homogeneous, xs, k, m, n)


def test_symmetric_difference_identity_fails_for_elementary():
    # x1*x2 - x1*x3 != (x2 - x3)(x1 + x2 + x3): the identity needs h_k, not e_k
    xs = [Polynomial.variable(i, 3) for i in range(3)]
    assert not _difference_identity(elementary_symmetric, xs, 2, 2, 3)
    assert _difference_identity(complete_homogeneous, xs, 2, 2, 3)


def test_complete_homogeneous_single_variable():
    assert complete_homogeneous(4, [(1, 2)]) == Polynomial.linear((1, 2)) ** 4
    assert complete_homogeneous(0, [(1, 0), (0, 1)]) == 1
    assert complete_homogeneous(2, [(1, 0), (0, 1)]) == A**2 + A * B + B**2
