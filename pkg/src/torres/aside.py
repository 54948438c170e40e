"""Morrison-Plesser numbers and their generating series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from . import exact
from .configuration import (Chamber, Configuration, c_positive_basis, sum_regularity)
from .errors import InvalidConfiguration
from .polynomial import RatFun, SparsePoly
from .residues import jk, restrict_polynomial


@dataclass(frozen=True)
class MPIndex:
    lam: tuple
    pairings: tuple   # <alpha_i, lam>
    degree: int       # <kappa, lam>

    @classmethod
    def of(cls, A: Configuration, lam) -> "MPIndex":
        lam = tuple(int(x) for x in lam)
        if len(lam) != A.r:
            raise InvalidConfiguration(f"lambda must have {A.r} entries, got {len(lam)}")
        pair = A.pairings(lam)
        return cls(lam, pair, sum(pair))


@dataclass(frozen=True)
class MPTerm:
    index: MPIndex
    value: Fraction


@dataclass
class SeriesResult:
    terms: list
    z: tuple
    partial_sum: complex
    bound: int
    basis: tuple
    shells: dict                  # <kappa, lam> -> summed contribution
    abs_shells: dict              # <kappa, lam> -> sum of |contribution|
    tail_estimate: float
    domain: Optional[dict] = None


def p_lambda_parts(A: Configuration, lam) -> tuple[tuple, tuple]:
    pair = A.pairings(lam)
    return tuple(max(p, 0) for p in pair), tuple(max(-p, 0) for p in pair)


def mp_fraction(P: SparsePoly, lam, A: Configuration) -> Optional[RatFun]:
    """The degree -r fraction P(alpha) p^-_lam kappa^<kappa,lam> / (p^+_lam prod alpha).

    Returns None when <kappa, lam> < 0.
    """
    idx = MPIndex.of(A, lam)
    if P.is_homogeneous() and P and P.degree() != A.n - A.r:
        raise InvalidConfiguration(f"P must have degree n - r = {A.n - A.r}, got {P.degree()}")
    if idx.degree < 0:
        return None
    num = restrict_polynomial(P, A)
    num = num * SparsePoly.linear(exact.frac_vector(A.kappa)) ** idx.degree
    for a, e in zip(A.alphas, idx.pairings):
        if e < 0:
            num = num * SparsePoly.linear(exact.frac_vector(a)) ** (-e - 1)
    den = [(a, e + 1) for a, e in zip(A.alphas, idx.pairings) if e >= 0]
    return RatFun.make(num, den)


def mp_number(P: SparsePoly, lam, A: Configuration, C: Chamber, method: str = "flags",
              xi=None) -> Fraction:
    phi = mp_fraction(P, lam, A)
    if phi is None:
        return Fraction(0)
    return jk(C, phi, method=method, xi=xi)


def z_power(A: Configuration, z: Sequence, lam) -> complex:
    out = complex(1)
    for zi, e in zip(z, A.pairings(lam)):
        if e:
            out *= complex(zi) ** e
    return out


def enumerate_lambdas(A: Configuration, basis: Sequence, bound: int) -> list:
    """lambda = sum l_j basis_j with l_j >= 0 and <kappa, lambda> <= bound, graded-lex in l."""
    degs = [exact.dot(A.kappa, b) for b in basis]
    if any(d < 0 for d in degs):
        raise InvalidConfiguration("basis pairs negatively with kappa")
    ranges = [range(bound // d + 1) if d > 0 else range(bound + 1) for d in degs]
    out = []
    for ls in product(*ranges):
        if sum(l * d for l, d in zip(ls, degs)) <= bound:
            out.append(ls)
    out.sort(key=lambda ls: (sum(ls), tuple(-x for x in ls)))
    r = A.r
    return [(ls, tuple(sum(l * b[k] for l, b in zip(ls, basis)) for k in range(r))) for ls in out]


def _tail_estimate(abs_shells: dict, block: int = 1) -> float:
    """Geometric tail from the last two blocks of ``block`` nonzero shells.

    Shell magnitudes can oscillate with period up to r in the degree, so the
    ratio test compares sums over blocks of that many nonzero shells.
    """
    nonzero = [v for _, v in sorted(abs_shells.items()) if v > 0]
    if len(nonzero) < 2 * block:
        return 0.0 if len(nonzero) <= 1 else math.inf
    a = sum(nonzero[-2 * block:-block])
    b = sum(nonzero[-block:])
    rho = b / a
    if rho >= 1:
        return math.inf
    return b * rho / (1 - rho)


def mp_series(P: SparsePoly, A: Configuration, C: Chamber, z: Sequence, bound: int,
              basis: Optional[Sequence] = None, method: str = "flags") -> SeriesResult:
    z = tuple(complex(x) for x in z)
    if len(z) != A.n:
        raise InvalidConfiguration(f"z must have {A.n} entries")
    if any(x == 0 for x in z):
        raise InvalidConfiguration("z has a zero coordinate")
    basis = tuple(tuple(b) for b in (basis if basis is not None else c_positive_basis(C)))
    terms = []
    shells: dict = {}
    abs_shells: dict = {}
    total = complex(0)
    for _, lam in enumerate_lambdas(A, basis, bound):
        idx = MPIndex.of(A, lam)
        val = mp_number(P, lam, A, C, method=method)
        terms.append(MPTerm(idx, val))
        if val:
            contrib = float(val) * z_power(A, z, lam)
            total += contrib
            shells[idx.degree] = shells.get(idx.degree, 0) + contrib
            abs_shells[idx.degree] = abs_shells.get(idx.degree, 0.0) + abs(contrib)
    return SeriesResult(terms, z, total, bound, basis, shells, abs_shells, _tail_estimate(abs_shells, A.r))


def xi_of_z(A: Configuration, z: Sequence) -> tuple:
    if any(complex(x) == 0 for x in z):
        raise InvalidConfiguration("z has a zero coordinate")
    t = [-math.log(abs(complex(x))) for x in z]
    return tuple(sum(ti * a[k] for ti, a in zip(t, A.alphas)) for k in range(A.r))


def convergence_check(A: Configuration, C: Chamber, z: Sequence, tau_min: float) -> dict:
    """Heuristic domain verdict from the regularity of xi(z) inside the chamber."""
    xi = xi_of_z(A, z)
    reg = float(sum_regularity(A, xi))
    if not C.contains(xi):
        verdict = "outside"
    elif reg >= tau_min:
        verdict = "inside"
    else:
        verdict = "marginal"
    return {"verdict": verdict, "xi": xi, "regularity": reg, "tau_min": tau_min}
