"""Seeded generators of random configurations, chambers and fractions."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Optional

from . import exact
from .configuration import (Chamber, Configuration, chamber_of, dual_cone_data,
                            is_projective, sum_regularity)
from .errors import InvalidConfiguration, SingularPointError
from .polynomial import RatFun, SparsePoly


def random_configuration(rng: random.Random, r: int, n: int, bound: int = 3,
                         require_projective: bool = True) -> Configuration:
    """Rank r, lattice-generating, zero-free configuration with |entries| <= bound."""
    while True:
        alphas = [tuple(rng.randint(-bound, bound) for _ in range(r)) for _ in range(n)]
        if any(not any(a) for a in alphas):
            continue
        if exact.rank(alphas) != r:
            continue
        f = exact.invariant_factors(exact.transpose(alphas))
        if any(x != 1 for x in f):
            continue
        if require_projective and not is_projective(alphas):
            continue
        return Configuration(tuple(alphas))


def random_chamber(rng: random.Random, A: Configuration, tries: int = 200) -> Chamber:
    for _ in range(tries):
        t = [Fraction(rng.randint(1, 60), rng.randint(1, 7)) for _ in range(A.n)]
        xi = tuple(sum(ti * a[k] for ti, a in zip(t, A.alphas)) for k in range(A.r))
        try:
            return chamber_of(A, xi)
        except (SingularPointError, InvalidConfiguration):
            continue
    raise RuntimeError("failed to find a generic chamber point")


def random_regular_point(rng: random.Random, C: Chamber, tries: int = 200) -> tuple:
    """A sum-regular point in the open chamber, as a random combination of its rays."""
    A = C.config
    rays = dual_cone_data(C).chamber_rays
    for _ in range(tries):
        w = [Fraction(rng.randint(1, 40), rng.randint(1, 9)) for _ in rays]
        xi = tuple(sum(c * ray[k] for c, ray in zip(w, rays)) for k in range(A.r))
        if sum_regularity(A, xi) > 0 and C.contains(xi):
            return xi
    raise RuntimeError("failed to sample a sum-regular point")


def random_homogeneous(rng: random.Random, nvars: int, degree: int, terms: int = 3,
                       coef_bound: int = 5) -> SparsePoly:
    exps = [e for e in product(range(degree + 1), repeat=nvars) if sum(e) == degree]
    poly = {}
    for _ in range(terms):
        e = rng.choice(exps)
        poly[e] = poly.get(e, 0) + rng.randint(-coef_bound, coef_bound)
    p = SparsePoly(nvars, poly)
    return p if p else SparsePoly(nvars, {exps[0]: 1})


def random_fraction(rng: random.Random, A: Configuration, extra: Optional[int] = None) -> RatFun:
    """A random degree -r element of R_A."""
    extra = rng.randint(0, 3) if extra is None else extra
    total = A.r + extra
    mults = [0] * A.n
    for _ in range(total):
        mults[rng.randrange(A.n)] += 1
    num = random_homogeneous(rng, A.r, extra)
    return RatFun.make(num, [(a, m) for a, m in zip(A.alphas, mults)])
