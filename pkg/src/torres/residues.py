"""Partial fractions, iterated residues and the Jeffrey-Kirwan residue.

Rational functions live on the r-dimensional space with coordinates u; a
covector alpha acts as the linear form u -> alpha . u.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from . import exact
from .configuration import (Chamber, Configuration, Flag, flags_for_xi,
                            signed_volume, sum_regularity)
from .errors import ConsistencyError, InvalidConfiguration, NotSumRegularError
from .polynomial import RatFun, SparsePoly, normalize_form


def restrict_polynomial(P: SparsePoly, A: Configuration) -> SparsePoly:
    """P(alpha_1(u), ..., alpha_n(u)) for a homogeneous P in n variables."""
    if P.nvars != A.n:
        raise InvalidConfiguration(f"polynomial has {P.nvars} variables, configuration has {A.n}")
    if not P.is_homogeneous():
        raise InvalidConfiguration(f"polynomial has mixed degrees {sorted(P.degrees())}")
    return P.substitute_linear(A.alphas)


def alpha_fraction(A: Configuration, num: SparsePoly, mults: Sequence[int]) -> RatFun:
    """num / prod alpha_i^mults[i]."""
    return RatFun.make(num, [(a, m) for a, m in zip(A.alphas, mults)])


def basic_fraction(A: Configuration, sigma) -> RatFun:
    mults = [0] * A.n
    for i in sigma:
        mults[i] += 1
    return alpha_fraction(A, SparsePoly.constant(A.r, 1), mults)


# ---------------------------------------------------------------------------
# partial fractions

@dataclass(frozen=True)
class BasicDecomposition:
    basic: tuple        # ((coef, sigma), ...) with phi = sum coef / prod alpha_sigma + degenerate
    degenerate: tuple   # RatFun terms whose denominators do not span

    def evaluate(self, A: Configuration, point):
        total = 0
        for coef, sigma in self.basic:
            d = 1
            for i in sigma:
                d = d * exact.dot(A.alphas[i], point)
            total = total + coef / d
        for t in self.degenerate:
            total = total + t.evaluate(point)
        return total


def _representatives(A: Configuration) -> list:
    """For each i, (lowest index j parallel to alpha_i, scale with alpha_i = s alpha_j)."""
    reps = []
    for i, a in enumerate(A.alphas):
        for j in range(i + 1):
            b = A.alphas[j]
            if exact.rank([a, b]) == 1:
                k = next(t for t, x in enumerate(b) if x)
                reps.append((j, Fraction(a[k], b[k])))
                break
    return reps


def _match_form(A: Configuration, form) -> tuple[int, Fraction]:
    for j, b in enumerate(A.alphas):
        if exact.rank([list(form), list(b)]) == 1:
            k = next(t for t, x in enumerate(b) if x)
            return j, Fraction(form[k]) / b[k]
    raise InvalidConfiguration(f"denominator form {tuple(map(str, form))} is not a multiple of any covector")


def _minimal_circuit(A: Configuration, support: Sequence[int]) -> tuple:
    for size in range(2, len(support) + 1):
        for sub in combinations(support, size):
            ker = exact.nullspace(exact.transpose([A.alphas[i] for i in sub]), size)
            if len(ker) == 1 and all(c != 0 for c in ker[0]):
                return sub, ker[0]
    raise AssertionError("dependent support without a circuit")


def partial_fractions(phi: RatFun, A: Configuration) -> BasicDecomposition:
    """Decompose a degree -r element of R_A into basic and degenerate fractions."""
    r, n = A.r, A.n
    if not phi.num:
        return BasicDecomposition((), ())
    if phi.degree() != -r:
        raise ValueError(f"fraction has degree {phi.degree()}, expected {-r}")
    mults = [0] * n
    num = phi.num
    for form, m in phi.den:
        j, s = _match_form(A, form)
        mults[j] += m
        num = num.scale(Fraction(1) / s ** m)
    work = {tuple(mults): num}
    basic: dict = {}
    degenerate = []
    while work:
        key = min(work, key=lambda k: (-sum(1 for x in k if x), k))
        num = work.pop(key)
        if not num:
            continue
        support = [i for i in range(n) if key[i]]
        vecs = [A.alphas[i] for i in support]
        if exact.rank(vecs) < len(support):
            circ, rel = _minimal_circuit(A, support)
            i0 = circ[-1]
            a0 = rel[-1]
            cs = {k: -a / a0 for k, a in zip(circ[:-1], rel[:-1])}
            # alpha_i0 = sum c_k alpha_k, so 1 = sum c_k alpha_k / alpha_i0
            frontier = {key: Fraction(1)}
            done: dict = {}
            while frontier:
                nxt: dict = {}
                for mk, coef in frontier.items():
                    if any(mk[k] == 0 for k in cs):
                        done[mk] = done.get(mk, 0) + coef
                        continue
                    for k, c in cs.items():
                        new = list(mk)
                        new[k] -= 1
                        new[i0] += 1
                        new = tuple(new)
                        nxt[new] = nxt.get(new, 0) + coef * c
                frontier = nxt
            for mk, coef in done.items():
                if coef:
                    work[mk] = work.get(mk, SparsePoly(r)) + num.scale(coef)
            continue
        if len(support) < r:
            degenerate.append(alpha_fraction(A, num, key))
            continue
        sigma = tuple(support)
        G = [list(exact.frac_vector(A.alphas[i])) for i in sigma]
        Ginv = exact.inverse(G)
        numv = num.substitute_linear(Ginv)
        m = [key[i] for i in sigma]
        for e, c in numv.terms.items():
            shifted = [x - y for x, y in zip(e, m)]
            if all(x == -1 for x in shifted):
                basic[sigma] = basic.get(sigma, 0) + c
            else:
                pos = SparsePoly.monomial([max(x, 0) for x in shifted], c).substitute_linear(G)
                den = [(A.alphas[i], -x) for i, x in zip(sigma, shifted) if x < 0]
                degenerate.append(RatFun.make(pos, den))
    return BasicDecomposition(tuple((c, s) for s, c in sorted(basic.items()) if c),
                              tuple(degenerate))


# ---------------------------------------------------------------------------
# iterated residues

def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for t in range(total + 1):
        for rest in _compositions(total - t, parts - 1):
            yield (t,) + rest


def _add_term(state: dict, den: dict, num: SparsePoly):
    key = tuple(sorted((f, m) for f, m in den.items() if m))
    state[key] = state.get(key, SparsePoly(num.nvars)) + num


def _residue_step(state: dict, j: int, r: int) -> dict:
    out: dict = {}
    for den, num in state.items():
        k = 0
        scale = Fraction(1)
        rest = []
        passthrough: dict = {}
        for form, mult in den:
            a = form[j]
            if a == 0:
                passthrough[form] = passthrough.get(form, 0) + mult
                continue
            bar = form[:j] + (Fraction(0),) + form[j + 1:]
            if not any(bar):
                k += mult
                scale *= a ** mult
            else:
                nb, s = normalize_form(bar)
                rest.append((a, nb, s, mult))
        if k == 0:
            continue
        by_power: dict = {}
        for e, c in num.terms.items():
            by_power.setdefault(e[j], {})[e[:j] + (0,) + e[j + 1:]] = c
        for e, terms in by_power.items():
            if e > k - 1:
                continue
            base = SparsePoly(r, terms).scale(Fraction(1) / scale)
            for ts in _compositions(k - 1 - e, len(rest)):
                coef = Fraction(1)
                newden = dict(passthrough)
                for t, (a, nb, s, m) in zip(ts, rest):
                    # (a y + s nb)^(-m) contributes binom(-m, t) a^t y^t (s nb)^(-m-t)
                    coef *= (-1) ** t * comb(m + t - 1, t) * a ** t / s ** (m + t)
                    newden[nb] = newden.get(nb, 0) + m + t
                _add_term(out, newden, base.scale(coef))
    return out


def iterated_residue(F: Flag, phi: RatFun) -> Fraction:
    """Res_F phi: residues at y_1 = 0, then y_2 = 0, ... in the flag's coordinates y = gamma(u)."""
    r = phi.nvars
    Ginv = exact.inverse([list(g) for g in F.gamma])
    num = phi.num.substitute_linear(Ginv)
    den: dict = {}
    for form, m in phi.den:
        yform = tuple(exact.dot(form, [row[c] for row in Ginv]) for c in range(r))
        nf, s = normalize_form(yform)
        num = num.scale(Fraction(1) / s ** m)
        den[nf] = den.get(nf, 0) + m
    state: dict = {}
    _add_term(state, den, num)
    for j in range(r):
        state = _residue_step(state, j, r)
    total = Fraction(0)
    for key, num in state.items():
        if key:
            raise AssertionError("denominator survived all residues")
        total += num.terms.get((0,) * r, 0)
    return total


# ---------------------------------------------------------------------------
# Jeffrey-Kirwan residue

def _degree_part(phi: RatFun, target: int) -> Optional[RatFun]:
    """The homogeneous component of phi of the given degree (None if absent)."""
    if not phi.num:
        return None
    comps = phi.num.homogeneous_components()
    part = comps.get(target + phi.den_degree())
    return None if part is None else RatFun(part, phi.den)


def jk_basic(C: Chamber, phi: RatFun) -> Fraction:
    A = C.config
    part = _degree_part(phi, -A.r)
    if part is None:
        return Fraction(0)
    dec = partial_fractions(part, A)
    total = Fraction(0)
    for coef, sigma in dec.basic:
        if sigma in C.bind:
            total += coef / abs(signed_volume(A, sigma))
    return total


def jk_via_flags(C: Chamber, xi, phi: RatFun) -> Fraction:
    A = C.config
    xi = exact.frac_vector(xi)
    if sum_regularity(A, xi) == 0:
        raise NotSumRegularError(f"{tuple(map(str, xi))} is not sum-regular")
    if not C.contains(xi):
        raise InvalidConfiguration(f"{tuple(map(str, xi))} is not in the chamber")
    part = _degree_part(phi, -A.r)
    if part is None:
        return Fraction(0)
    return sum((F.nu * iterated_residue(F, part) for F in flags_for_xi(A, xi, "plus")),
               Fraction(0))


def regular_point(C: Chamber) -> tuple:
    """A deterministic sum-regular point of the chamber (xi0 itself when possible)."""
    A = C.config
    if sum_regularity(A, C.xi0) > 0:
        return C.xi0
    r = A.r
    directions = [tuple(Fraction(1, 7 ** k) for k in range(r)),
                  tuple(Fraction(1, 3 ** (r - k)) for k in range(r)),
                  tuple(Fraction((-1) ** k, 5 ** k) for k in range(r))]
    scale = max(abs(x) for x in C.xi0)
    for p in range(1, 40):
        eps = scale / Fraction(10) ** p
        for d in directions:
            xi = tuple(x + eps * y for x, y in zip(C.xi0, d))
            if sum_regularity(A, xi) > 0 and C.contains(xi):
                return xi
    raise NotSumRegularError("could not perturb the chamber point to a sum-regular one")


def jk(C: Chamber, phi: RatFun, method: str = "crosscheck", xi=None) -> Fraction:
    if method == "basic":
        return jk_basic(C, phi)
    if xi is None:
        xi = regular_point(C)
    if method == "flags":
        return jk_via_flags(C, xi, phi)
    if method != "crosscheck":
        raise ValueError(f"unknown method {method!r}")
    a = jk_basic(C, phi)
    b = jk_via_flags(C, xi, phi)
    if a != b:
        raise ConsistencyError(f"basic decomposition gives {a}, flag sum gives {b}")
    return a
