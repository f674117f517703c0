"""Shared generators and the independent sympy oracle used across tests."""

import random

import sympy
from sympy.polys.matrices import DomainMatrix

from gkmlegs.bundle import random_leg_bundle
from gkmlegs.cohomology import CohomologyClass, chern
from gkmlegs.corpus import cp2_base, square_base
from gkmlegs.poly import Polynomial


def random_poly(rng, nvars, max_degree, max_terms=4, bound=5):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        deg = rng.randint(0, max_degree)
        exps = [0] * nvars
        for _ in range(deg):
            exps[rng.randrange(nvars)] += 1
        terms[tuple(exps)] = rng.randint(-bound, bound)
    return Polynomial(terms, nvars)


def random_linear(rng, nvars, bound=4):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(nvars))
        if any(v):
            return v


def degree_one_classes(base, seeds):
    """c1 of random line bundles: classes with linear values."""
    return [chern(random_leg_bundle(base, 1, s), 1) for s in seeds]


def random_base_class(rng, base, pool, max_degree=6):
    """a + b*g + c*g*h with constants a, b, c and g, h from ``pool``;
    total degree at most ``max_degree``."""
    n = base.rank
    g, h = rng.choice(pool), rng.choice(pool)
    a = random_poly(rng, n, max_degree)
    b = random_poly(rng, n, max_degree - 1)
    c = random_poly(rng, n, max_degree - 2)
    return a + g * b + g * h * c


def bundle_suite(count, ranks=(2, 3), gkm=True, seed0=0):
    """Random bundles over the triangle and the 4-cycle."""
    out = []
    bases = [cp2_base(), square_base()]
    for i in range(count):
        base = bases[i % 2]
        rank = ranks[(i // 2) % len(ranks)]
        out.append(random_leg_bundle(base, rank, seed0 + i, gkm=gkm))
    return out


# -- sympy oracle -----------------------------------------------------------


def to_sympy(p, syms):
    expr = sympy.Integer(0)
    for exps, c in p.items():
        term = sympy.Integer(c)
        for s, e in zip(syms, exps):
            term *= s**e
        expr += term
    return expr


def vandermonde_oracle(weights, values, nvars):
    """Solve sum_k c_k w_i^k = X_i by Cramer's rule over the fraction field
    of Z[t]; return the c_k as Polynomials, or None when some c_k is not a
    polynomial with integer coefficients.

    Determinants come from sympy's DomainMatrix over ZZ[t1..tn]; quotients
    are taken over QQ and then checked for integrality.
    """
    syms = sympy.symbols(f"t1:{nvars + 1}")
    ring = sympy.ZZ[syms]
    R = len(weights)
    ws = [ring.from_sympy(to_sympy(Polynomial.linear(w), syms)) for w in weights]
    xs = [ring.from_sympy(to_sympy(v, syms)) for v in values]
    rows = [[ws[i] ** k for k in range(R)] for i in range(R)]
    det = DomainMatrix(rows, (R, R), ring).det()
    den = sympy.Poly(ring.to_sympy(det), *syms, domain=sympy.QQ)
    out = []
    for k in range(R):
        rk = [[xs[i] if j == k else rows[i][j] for j in range(R)] for i in range(R)]
        num = sympy.Poly(ring.to_sympy(DomainMatrix(rk, (R, R), ring).det()), *syms, domain=sympy.QQ)
        q, r = sympy.div(num, den)
        if not r.is_zero:
            return None
        terms = q.terms() if not q.is_zero else []
        if any(not c.is_integer for _, c in terms):
            return None
        out.append(Polynomial({m: int(c) for m, c in terms}, nvars))
    return out


def random_fiber_case(rng, rank, nvars):
    """Distinct leg labels plus values that are valid, perturbed or random."""
    weights = []
    while len(weights) < rank:
        w = random_linear(rng, nvars, 3)
        if w not in weights:
            weights.append(w)
    wp = [Polynomial.linear(w) for w in weights]
    mode = rng.choice(["valid", "valid", "perturbed", "random"])
    if mode == "random":
        values = [random_poly(rng, nvars, 3) for _ in range(rank)]
    else:
        cs = [random_poly(rng, nvars, 3, bound=3) for _ in range(rank)]
        values = [sum((c * w**k for k, c in enumerate(cs)), Polynomial.zero(nvars)) for w in wp]
        if mode == "perturbed":
            i = rng.randrange(rank)
            values[i] = values[i] + random_poly(rng, nvars, 2, max_terms=2)
    return weights, values
