import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from helpers import F1, P1P1, P2
from torres import exact
from torres.configuration import (Configuration, basis_index_sets, chamber_of, enumerate_flags,
                                  make_flag, signed_volume)
from torres.errors import ConsistencyError, InvalidConfiguration, NotSumRegularError
from torres.polynomial import RatFun, SparsePoly
from torres.residues import (alpha_fraction, basic_fraction, iterated_residue, jk, jk_basic,
                             jk_via_flags, partial_fractions, regular_point, restrict_polynomial)
from torres.sampling import (random_chamber, random_configuration, random_fraction,
                             random_regular_point)

seeds = st.integers(0, 2**32 - 1)
TRIANGLE = Configuration(((1, 0), (0, 1), (1, 1)))


def sympy_iterated_residue(F, phi):
    """Independent oracle: sympy residues in y_1, then y_2, ..., with y = gamma u."""
    r = phi.nvars
    ys = sympy.symbols(f"y1:{r + 1}")
    G = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in g] for g in F.gamma])
    u = G.inv() * sympy.Matrix(ys)
    expr = sympy.Integer(0)
    for e, c in phi.num.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for k, p in enumerate(e):
            term *= u[k] ** p
        expr += term
    for form, m in phi.den:
        expr /= sum(sympy.Rational(Fraction(a).numerator, Fraction(a).denominator) * u[k]
                    for k, a in enumerate(form)) ** m
    for y in ys:
        expr = sympy.residue(sympy.together(expr), y, 0)
    val = sympy.nsimplify(sympy.simplify(expr))
    return Fraction(int(val.p), int(val.q))


def test_basic_fraction_examples():
    C = chamber_of(F1, (2, 1))
    assert jk(C, basic_fraction(F1, (0, 2))) == 1
    assert jk(C, basic_fraction(F1, (2, 3))) == 0
    assert jk(C, basic_fraction(F1, (0, 3))) == 1


def test_partial_fraction_triangle():
    # 1/(u1 (u1 + u2)) is already basic on {alpha_1, alpha_3}
    phi = alpha_fraction(TRIANGLE, SparsePoly.constant(2, 1), [1, 0, 1])
    dec = partial_fractions(phi, TRIANGLE)
    assert dec.basic == ((Fraction(1), (0, 2)),) and not dec.degenerate
    # 1/(u1 u2 (u1 + u2)) * u1 reduces to 1/(u2 (u1 + u2)) after cancelling
    phi = alpha_fraction(TRIANGLE, SparsePoly.linear((1, 0)), [1, 1, 1])
    dec = partial_fractions(phi, TRIANGLE)
    for pt in [(1, 2), (3, -5), (Fraction(1, 3), 7)]:
        assert dec.evaluate(TRIANGLE, pt) == phi.evaluate(pt)


def test_partial_fraction_single_variable():
    phi = RatFun.make(SparsePoly.linear((1, 0)), [((1, 0), 2), ((0, 1), 1)])
    dec = partial_fractions(phi, TRIANGLE)
    assert dec.basic == ((Fraction(1), (0, 1)),)


def test_partial_fraction_degree_check():
    phi = alpha_fraction(TRIANGLE, SparsePoly.constant(2, 1), [1, 0, 0])
    with pytest.raises(ValueError):
        partial_fractions(phi, TRIANGLE)


def test_iterated_residue_examples():
    F = make_flag(TRIANGLE, [[(1, 0)], [(1, 0), (0, 1)]])
    assert iterated_residue(F, basic_fraction(TRIANGLE, (0, 1))) == 1
    assert iterated_residue(F, basic_fraction(TRIANGLE, (1, 2))) == 0
    # first residue at u1 = 0 of 1/(u2 (u1+u2)) vanishes
    assert iterated_residue(F, alpha_fraction(TRIANGLE, SparsePoly.constant(2, 1), [0, 1, 1])) == 0


def test_restrict_polynomial():
    P = SparsePoly(4, {(1, 0, 1, 0): 1})
    assert restrict_polynomial(P, F1) == SparsePoly(2, {(1, 1): 1})
    with pytest.raises(InvalidConfiguration):
        restrict_polynomial(SparsePoly(4, {(1, 0, 0, 0): 1, (0, 0, 0, 0): 1}), F1)


@pytest.mark.parametrize("seed", range(6))
def test_iterated_residue_matches_sympy(seed):
    rng = random.Random(seed)
    phi = random_fraction(rng, F1, extra=rng.randint(0, 2))
    for F in enumerate_flags(F1):
        if F.proper:
            assert iterated_residue(F, phi) == sympy_iterated_residue(F, phi)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_decomposition_reconstructs(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    A = random_configuration(rng, r, rng.randint(r + 1, 5))
    phi = random_fraction(rng, A)
    dec = partial_fractions(phi, A)
    for sigma in (s for _, s in dec.basic):
        assert exact.det([A.alphas[i] for i in sigma]) != 0
    for _ in range(3):
        pt = tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(r))
        if any(exact.dot(a, pt) == 0 for a in A.alphas):
            continue
        assert dec.evaluate(A, pt) == phi.evaluate(pt)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_residue_independent_of_adapted_basis(seed):
    rng = random.Random(seed)
    A = random_configuration(rng, 2, rng.randint(3, 5))
    phi = random_fraction(rng, A)
    for F in enumerate_flags(A):
        if not F.proper:
            continue
        g1, g2 = F.gamma
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        s = Fraction(rng.choice([1, 2, 3, -1, -2]), rng.randint(1, 3))
        G = make_flag(A, [[list(k) for k in F.key[0]], [list(k) for k in F.key[1]]],
                      gamma=[tuple(s * x for x in g1), tuple((y + c * x) / s for x, y in zip(g1, g2))])
        assert G.key == F.key
        assert iterated_residue(G, phi) == iterated_residue(F, phi)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_jk_linear(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    A = random_configuration(rng, r, rng.randint(r + 1, 5))
    C = random_chamber(rng, A)
    phi, psi = random_fraction(rng, A), random_fraction(rng, A)
    a, b = Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4), 3)
    # common denominator form of a*phi + b*psi
    def merged(f):
        out = {}
        for form, m in f.den:
            out[form] = out.get(form, 0) + m
        return out

    den = {}
    for f in (phi, psi):
        for form, m in merged(f).items():
            den[form] = max(den.get(form, 0), m)
    lcd = tuple(den.items())

    def lift(f):
        extra = SparsePoly.constant(r, 1)
        have = merged(f)
        for form, m in lcd:
            extra = extra * SparsePoly.linear(form) ** (m - have.get(form, 0))
        return f.num * extra

    combo = RatFun.make(lift(phi).scale(a) + lift(psi).scale(b), lcd)
    assert jk(C, combo) == a * jk(C, phi) + b * jk(C, psi)


def test_jk_other_degrees_vanish():
    C = chamber_of(F1, (2, 1))
    phi = alpha_fraction(F1, SparsePoly.constant(2, 1), [1, 0, 0, 0])
    assert jk(C, phi) == 0
    phi = alpha_fraction(F1, SparsePoly(2, {(1, 0): 1, (0, 0): 1}), [1, 0, 1, 1])
    # only the degree -2 part u1/(u1 u2 (u1+u2)) contributes
    assert jk(C, phi) == jk(C, alpha_fraction(F1, SparsePoly.linear((1, 0)), [1, 0, 1, 1]))


def test_relation_combination_vanishes():
    # alpha_3 = alpha_1 + alpha_2, so f_12 - f_13 - f_23 is the zero function
    for xi in [(2, 1), (1, 2)]:
        C = chamber_of(TRIANGLE, xi)
        total = (jk(C, basic_fraction(TRIANGLE, (0, 1))) - jk(C, basic_fraction(TRIANGLE, (0, 2)))
                 - jk(C, basic_fraction(TRIANGLE, (1, 2))))
        assert total == 0


def test_jk_depends_on_chamber():
    lower, upper = chamber_of(TRIANGLE, (2, 1)), chamber_of(TRIANGLE, (1, 2))
    f13 = basic_fraction(TRIANGLE, (0, 2))
    assert jk(lower, f13) == 1 and jk(upper, f13) == 0


def test_jk_flags_rejects_bad_points():
    C = chamber_of(TRIANGLE, (2, 1))
    with pytest.raises(NotSumRegularError):
        jk_via_flags(C, (1, 1), basic_fraction(TRIANGLE, (0, 1)))
    with pytest.raises(InvalidConfiguration):
        jk_via_flags(C, (1, 3), basic_fraction(TRIANGLE, (0, 1)))


def test_regular_point_perturbs():
    C = chamber_of(P1P1, (1, 1))
    xi = regular_point(C)
    assert xi != C.xi0 and C.contains(xi)


def test_crosscheck_raises_on_disagreement(monkeypatch):
    import torres.residues as res
    C = chamber_of(F1, (2, 1))
    monkeypatch.setattr(res, "jk_basic", lambda C, phi: Fraction(99))
    with pytest.raises(ConsistencyError):
        res.jk(C, basic_fraction(F1, (0, 2)))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_basic_and_flag_jk_agree(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    A = random_configuration(rng, r, rng.randint(r + 1, 6))
    C = random_chamber(rng, A)
    phi = random_fraction(rng, A)
    xi = random_regular_point(rng, C)
    assert jk_basic(C, phi) == jk_via_flags(C, xi, phi)


def test_p2_volume():
    C = chamber_of(P2, (1,))
    assert jk(C, basic_fraction(P2, (0,))) == 1
    P = SparsePoly(1, {(0,): 1})
    assert jk(C, RatFun.make(P, [((1,), 1)])) == 1


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_sidedness(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    A = random_configuration(rng, r, rng.randint(r + 1, 5))
    C = random_chamber(rng, A)
    for sigma in basis_index_sets(A):
        expected = Fraction(1) / abs(signed_volume(A, sigma)) if sigma in C.bind else 0
        assert jk(C, basic_fraction(A, sigma)) == expected
