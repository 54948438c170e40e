"""Configurations of covectors, Gale duality, chambers and flags.

Indices of the covectors are 0-based throughout the library; the command
line front end converts to 1-based labels when printing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, permutations, product
from typing import Optional, Sequence

from . import exact
from .errors import InvalidConfiguration, NotSumRegularError, SearchExhausted, SingularPointError


@dataclass(frozen=True)
class Configuration:
    """A sequence of ``n`` integer covectors in dimension ``r``."""

    alphas: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in a) for a in self.alphas)
        if not rows:
            raise InvalidConfiguration("configuration must contain at least one covector")
        widths = {len(a) for a in rows}
        if len(widths) != 1:
            raise InvalidConfiguration(f"covectors have inconsistent lengths {sorted(widths)}")
        object.__setattr__(self, "alphas", rows)

    @property
    def r(self) -> int:
        return len(self.alphas[0])

    @property
    def n(self) -> int:
        return len(self.alphas)

    @cached_property
    def kappa(self) -> tuple:
        return tuple(sum(col) for col in zip(*self.alphas))

    def matrix(self) -> list:
        """The r x n matrix whose columns are the covectors."""
        return exact.transpose(self.alphas)

    def pairings(self, lam) -> tuple:
        return tuple(exact.dot(a, lam) for a in self.alphas)


@dataclass(frozen=True)
class Diagnostics:
    projective: bool
    spanning: bool
    lattice_generating: bool
    kappa: tuple


def _circuits(vectors: Sequence) -> list:
    """All circuits as (support, kernel vector) pairs."""
    r = len(vectors[0])
    out = []
    for size in range(1, min(r + 1, len(vectors)) + 1):
        for sub in combinations(range(len(vectors)), size):
            M = exact.transpose([vectors[i] for i in sub])
            ker = exact.nullspace(M, size)
            if len(ker) != 1 or any(c == 0 for c in ker[0]):
                continue
            out.append((sub, ker[0]))
    return out


def is_projective(vectors) -> bool:
    """True iff some functional is strictly positive on every vector.

    By Gordan's alternative this fails exactly when a nonnegative nonzero
    relation exists, and such a relation exists iff some circuit has a
    sign-constant kernel vector.
    """
    for _, k in _circuits(list(vectors)):
        if all(c > 0 for c in k) or all(c < 0 for c in k):
            return False
    return True


def in_relative_interior(generators, v) -> bool:
    """Exact test that ``v`` is a strictly positive combination of ``generators``.

    Uses the fact that v lies in relint C iff v - eps*p lies in C for some
    eps > 0, where p is the sum of the generators.
    """
    gens = [exact.frac_vector(g) for g in generators]
    v = exact.frac_vector(v)
    if not gens:
        return not any(v)
    dim = exact.rank(gens)
    p = [sum(col) for col in zip(*gens)]
    for sub in combinations(range(len(gens)), dim):
        basis = [gens[i] for i in sub]
        if exact.rank(basis) != dim:
            continue
        M = exact.transpose(basis)
        sv = exact.solve_rational(M, list(v))
        if sv is None:
            return False
        sp = exact.solve_rational(M, p)
        if all(cv > 0 or (cv == 0 and cp <= 0) for cv, cp in zip(sv[0], sp[0])):
            return True
    return False


def validate(A: Configuration) -> Diagnostics:
    for i, a in enumerate(A.alphas):
        if not any(a):
            raise InvalidConfiguration(f"covector {i} is zero")
    if A.n < A.r:
        raise InvalidConfiguration(f"need n >= r, got n={A.n}, r={A.r}")
    factors = exact.invariant_factors(A.matrix())
    lattice = len(factors) == A.r and all(f == 1 for f in factors)
    projective = is_projective(A.alphas)
    spanning = projective and all(
        in_relative_interior(A.alphas[:k] + A.alphas[k + 1:], A.kappa) for k in range(A.n)
    )
    return Diagnostics(projective, spanning, lattice, A.kappa)


def require_valid(A: Configuration, spanning: bool = False) -> Diagnostics:
    """Validate and raise ``InvalidConfiguration`` naming the failed predicate."""
    d = validate(A)
    if exact.rank(A.alphas) != A.r:
        raise InvalidConfiguration("covectors do not span the space")
    if not d.projective:
        raise InvalidConfiguration("configuration is not projective")
    if not d.lattice_generating:
        raise InvalidConfiguration("covectors do not generate the lattice")
    if spanning and not d.spanning:
        raise InvalidConfiguration("configuration is not spanning")
    return d


# ---------------------------------------------------------------------------
# Gale duality

@dataclass(frozen=True)
class GalePair:
    A: Configuration
    B: Optional[Configuration]  # None when n == r
    d: int

    @property
    def betas(self) -> tuple:
        if self.B is None:
            return tuple(() for _ in range(self.A.n))
        return self.B.alphas


def gale_dual(A: Configuration) -> GalePair:
    """Saturated integer Gale dual, oriented so det([alpha rows; K rows]) > 0."""
    M = A.matrix()
    if exact.rank(M) != A.r:
        raise InvalidConfiguration("covectors do not span the space")
    K = [list(row) for row in exact.integer_kernel(M)]
    d = A.n - A.r
    if d == 0:
        return GalePair(A, None, 0)
    if exact.det([list(row) for row in M] + K) < 0:
        K[0] = [-x for x in K[0]]
    return GalePair(A, Configuration(tuple(zip(*K))), d)


def lattice_equivalent(X: Sequence, Y: Sequence) -> bool:
    """Do the rows of X and Y generate the same integer lattice?"""
    hx = [row for row in exact.hnf(X)[0] if any(row)]
    hy = [row for row in exact.hnf(Y)[0] if any(row)]
    return hx == hy


# ---------------------------------------------------------------------------
# bases, volumes, chambers

def basis_index_sets(A: Configuration) -> list:
    return [s for s in combinations(range(A.n), A.r)
            if exact.det([A.alphas[i] for i in s]) != 0]


def signed_volume(A: Configuration, sigma) -> Fraction:
    v = exact.det([A.alphas[i] for i in sigma])
    if v == 0:
        raise InvalidConfiguration(f"index set {tuple(sigma)} is not a basis")
    return v


def complement(sigma, n: int) -> tuple:
    s = set(sigma)
    return tuple(i for i in range(n) if i not in s)


@dataclass(frozen=True)
class Chamber:
    config: Configuration
    xi0: tuple
    bind: frozenset

    def contains(self, xi) -> bool:
        """Is xi in the open chamber (same bind set, no wall coordinate)?"""
        try:
            return chamber_of(self.config, xi).bind == self.bind
        except (SingularPointError, InvalidConfiguration):
            return False


def chamber_of(A: Configuration, xi0) -> Chamber:
    xi0 = exact.frac_vector(xi0)
    bind = set()
    for sigma in basis_index_sets(A):
        coords = exact.coordinates([A.alphas[i] for i in sigma], xi0)
        if all(c > 0 for c in coords):
            bind.add(sigma)
        elif all(c >= 0 for c in coords):
            raise SingularPointError(
                f"point {tuple(map(str, xi0))} lies on the boundary of the cone of {sigma}", sigma)
    if not bind:
        raise InvalidConfiguration(f"point {tuple(map(str, xi0))} is outside cone(A)")
    return Chamber(A, xi0, frozenset(bind))


# ---------------------------------------------------------------------------
# sum-regularity

def partial_sums(A: Configuration) -> list:
    sums = set()
    for mask in product((0, 1), repeat=A.n):
        v = tuple(sum(a[k] for a, m in zip(A.alphas, mask) if m) for k in range(A.r))
        if any(v):
            sums.add(v)
    return sorted(sums)


@lru_cache(maxsize=64)
def _regularity_data(alphas: tuple) -> tuple:
    A = Configuration(alphas)
    sums = partial_sums(A)
    r = A.r
    if r == 1:
        return (((Fraction(1),), max(abs(s[0]) for s in sums)),)
    normals = {}
    for sub in combinations(sums, r - 1):
        nv = exact.normal_vector(sub, r)
        if not any(nv):
            continue
        nv = exact.primitive(nv)
        if nv[next(i for i, x in enumerate(nv) if x)] < 0:
            nv = tuple(-x for x in nv)
        if nv not in normals:
            normals[nv] = max(abs(exact.dot(nv, s)) for s in sums)
    return tuple(sorted(normals.items()))


def sum_regularity(A: Configuration, xi):
    """The minimum over sum-bases of |coordinate of xi|.

    For a hyperplane H spanned by partial sums and a partial sum gamma off H,
    the gamma-coordinate of xi in any basis extending H is n_H(xi)/n_H(gamma),
    so the minimum is taken over (normal, max |n_H(gamma)|) pairs.
    Exact for rational xi, floating for float input.
    """
    data = _regularity_data(A.alphas)
    best = None
    for nv, mx in data:
        val = abs(exact.dot(nv, xi)) / mx
        if best is None or val < best:
            best = val
    return best


# ---------------------------------------------------------------------------
# flags

@dataclass(frozen=True)
class Flag:
    """A complete flag of subspaces spanned by covectors of the configuration."""

    key: tuple                # reduced echelon bases of F_1, ..., F_r
    stage: tuple              # stage[i] = j (1-based) with alpha_i in F_j minus F_{j-1}
    gamma: tuple              # adapted basis, det = +1
    kappas: tuple             # kappa_1, ..., kappa_r
    nu: int
    dF: int
    coeffs: tuple             # coeffs[i] = coordinates of alpha_i in the gamma basis
    m: tuple                  # m[i] = coeffs[i][stage[i] - 1]

    @property
    def proper(self) -> bool:
        return self.dF != 0

    @property
    def lines(self) -> tuple:
        return self.key


def _echelon_key(vectors) -> tuple:
    R, piv = exact.rref(vectors)
    return tuple(tuple(row) for row in R[:len(piv)])


def make_flag(A: Configuration, stages: Sequence[Sequence], gamma: Optional[Sequence] = None) -> Flag:
    """Build a Flag from stage bases (each a list of covectors spanning F_j).

    With ``gamma`` omitted, the adapted basis takes the lowest-index covector
    entering each stage and rescales the last one to unit determinant.
    """
    r = A.r
    key = tuple(_echelon_key(s) for s in stages)
    stage = []
    for a in A.alphas:
        for j, s in enumerate(stages, start=1):
            if exact.rank(list(s) + [a]) == j:
                stage.append(j)
                break
    if gamma is None:
        gam = []
        for j in range(1, r + 1):
            i = stage.index(j)
            gam.append(exact.frac_vector(A.alphas[i]))
        dt = exact.det(gam)
        gam[-1] = tuple(x / dt for x in gam[-1])
    else:
        gam = [exact.frac_vector(g) for g in gamma]
        if exact.det(gam) != 1:
            raise ValueError("adapted basis must have determinant +1")
    kappas = []
    for j in range(1, r + 1):
        kappas.append(tuple(sum(a[k] for a, s in zip(A.alphas, stage) if s <= j) for k in range(r)))
    dF = int(exact.det(kappas))
    coeffs = tuple(exact.coordinates(gam, a) for a in A.alphas)
    m = tuple(c[s - 1] for c, s in zip(coeffs, stage))
    if any(c[k] != 0 for c, s in zip(coeffs, stage) for k in range(s, r)):
        raise ValueError("basis is not adapted to the flag")
    return Flag(key, tuple(stage), tuple(gam), tuple(kappas), (dF > 0) - (dF < 0), dF, coeffs, m)


@lru_cache(maxsize=64)
def _flags_cached(alphas: tuple) -> tuple:
    A = Configuration(alphas)
    r = A.r
    seen = {}

    def grow(chain: list, keys: tuple):
        j = len(chain)
        if j == r:
            if keys not in seen:
                seen[keys] = make_flag(A, chain)
            return
        prev = chain[-1] if chain else []
        tried = set()
        for a in A.alphas:
            cand = list(prev) + [a]
            if exact.rank(cand) != j + 1:
                continue
            k = _echelon_key(cand)
            if k in tried:
                continue
            tried.add(k)
            grow(chain + [[list(row) for row in k]], keys + (k,))

    grow([], ())
    return tuple(seen[k] for k in sorted(seen))


def enumerate_flags(A: Configuration) -> list:
    return list(_flags_cached(A.alphas))


def flag_coefficients(F: Flag, xi) -> Optional[tuple]:
    """Coordinates of xi in the kappa basis, or None for an improper flag."""
    if not F.proper:
        return None
    return exact.coordinates(F.kappas, xi)


def _flag_coefficients_float(F: Flag, xi) -> tuple:
    import numpy as np
    K = np.array([[float(x) for x in k] for k in F.kappas]).T
    return tuple(np.linalg.solve(K, np.array([float(x) for x in xi])))


def flags_for_xi(A: Configuration, xi, mode: str = "plus") -> list:
    """Flags whose kappa-cone (mode 'plus') or half-open cone (mode 'zero') holds xi."""
    if mode not in ("plus", "zero"):
        raise ValueError(f"unknown mode {mode!r}")
    floating = any(isinstance(x, float) for x in xi)
    out = []
    for F in enumerate_flags(A):
        if not F.proper:
            span = [list(k) for k in F.kappas]
            if exact.rank(span + [list(exact.frac_vector(xi))]) == exact.rank(span):
                raise NotSumRegularError("xi is not sum-regular: it lies in the span of an improper flag")
            continue
        c = _flag_coefficients_float(F, xi) if floating else flag_coefficients(F, xi)
        head = c if mode == "plus" else c[:-1]
        if all(x >= 0 for x in head):
            out.append(F)
    return out


def flag_from_basis(A: Configuration, basis) -> Flag:
    """The flag F_j = span(basis[:j]) for an ordered basis of covectors."""
    key = tuple(_echelon_key(basis[:j]) for j in range(1, len(basis) + 1))
    for F in enumerate_flags(A):
        if F.key == key:
            return F
    raise InvalidConfiguration("basis does not define a flag of the configuration")


# ---------------------------------------------------------------------------
# baricentric identity

def baricentric_sum(A: Configuration, sigma, xi) -> int:
    """Signed count of permuted sigma-flags whose kappa-cone holds xi."""
    xi = exact.frac_vector(xi)
    total = 0
    for perm in permutations(range(len(sigma))):
        F = flag_from_basis(A, [A.alphas[sigma[p]] for p in perm])
        if not F.proper:
            continue
        c = exact.coordinates(F.kappas, xi)
        if all(x >= 0 for x in c):
            total += _perm_sign(perm) * F.nu
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def cone_indicator(vectors, xi) -> int:
    c = exact.coordinates(vectors, xi)
    return int(all(x >= 0 for x in c))


# ---------------------------------------------------------------------------
# dual cone and positive bases

@dataclass(frozen=True)
class DualConeData:
    generators: tuple   # extreme rays of the dual cone (primitive integer vectors)
    chamber_rays: tuple  # extreme rays of the closed chamber

    def contains(self, lam) -> bool:
        return all(exact.dot(ray, lam) >= 0 for ray in self.chamber_rays)


def dual_cone_data(C: Chamber) -> DualConeData:
    A = C.config
    r = A.r
    gens = set()
    for sigma in C.bind:
        G = [exact.frac_vector(A.alphas[i]) for i in sigma]
        inv = exact.inverse(G)
        for col in exact.transpose(inv):
            gens.add(exact.primitive(col))
    gens = sorted(gens)
    extreme = [g for g in gens if not exact.in_cone([h for h in gens if h != g], g, r)]
    rays = exact.supporting_normals(extreme, r)
    return DualConeData(tuple(extreme), tuple(rays))


def _lattice_points(rays, height: int, r: int):
    pts = []
    for v in product(range(-height, height + 1), repeat=r):
        if any(v) and all(exact.dot(n, v) >= 0 for n in rays):
            pts.append(v)
    pts.sort(key=lambda v: (max(abs(x) for x in v), sum(abs(x) for x in v), v))
    return pts


def is_c_positive_basis(C: Chamber, lams) -> bool:
    A = C.config
    lams = [tuple(int(x) for x in l) for l in lams]
    if len(lams) != A.r or abs(exact.det(lams)) != 1:
        return False
    if any(exact.dot(A.kappa, l) < 0 for l in lams):
        return False
    data = dual_cone_data(C)
    return all(all(c >= 0 for c in exact.coordinates(lams, g)) for g in data.generators)


def c_positive_basis(C: Chamber, max_height: int = 6) -> tuple:
    """A positively oriented positive basis found by bounded lattice search.

    Looks for a unimodular set of lattice points of the closed chamber whose
    cone contains kappa; the dual basis then satisfies all three conditions.
    """
    A = C.config
    r = A.r
    if not exact.in_cone(dual_cone_data(C).chamber_rays, A.kappa, r):
        raise InvalidConfiguration("kappa is not in the closure of the chamber")
    rays = dual_cone_data(C).generators
    chamber_gens = dual_cone_data(C).chamber_rays
    for h in range(1, max_height + 1):
        pts = _lattice_points(rays, h, r)
        # prefer the chamber rays themselves
        pts.sort(key=lambda v: (v not in chamber_gens,))
        for combo in combinations(pts, r):
            if abs(exact.det(combo)) != 1:
                continue
            if not exact.in_cone(combo, A.kappa, r):
                continue
            inv = exact.inverse([list(v) for v in combo])
            lams = [tuple(int(x) for x in col) for col in exact.transpose(inv)]
            if exact.det(lams) < 0:
                if r == 1:
                    continue
                lams[0], lams[1] = lams[1], lams[0]
            if is_c_positive_basis(C, lams):
                return tuple(lams)
    raise SearchExhausted(f"no positive basis with lattice height <= {max_height}", max_height)
