from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from torres import exact


def int_matrix(rows, cols, lo=-6, hi=6):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


@st.composite
def square(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return draw(int_matrix(n, n))


@st.composite
def rect(draw, max_m=4, max_k=5):
    m = draw(st.integers(1, max_m))
    k = draw(st.integers(1, max_k))
    return draw(int_matrix(m, k))


def test_det_examples():
    assert exact.det([[2, 1], [1, 1]]) == 1
    assert exact.det([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    assert exact.det([[Fraction(1, 2), 0], [0, 4]]) == 2
    assert exact.det([]) == 1


def test_hnf_example():
    H, U = exact.hnf([[2, 4], [3, 5]])
    assert H == [[1, 1], [0, 2]]
    assert exact.matmul(U, [[2, 4], [3, 5]]) == H


def test_smith_example():
    S, P, Q = exact.smith([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [S[i][i] for i in range(3)] == [2, 6, 12]


def test_integer_kernel_saturated():
    # 2x + 4y = 0 has kernel spanned by (2, -1), not (4, -2)
    K = exact.integer_kernel([[2, 4]])
    assert K == [(2, -1)] or K == [(-2, 1)]


def test_solve_rational_inconsistent():
    assert exact.solve_rational([[1, 1], [1, 1]], [1, 2]) is None
    x, kernel = exact.solve_rational([[1, 1]], [3])
    assert x[0] + x[1] == 3 and len(kernel) == 1
    with pytest.raises(ValueError):
        exact.solve_rational([[1, 1]], [1, 2])


def test_in_cone():
    gens = [(1, 0), (1, 1)]
    assert exact.in_cone(gens, (2, 1), 2)
    assert exact.in_cone(gens, (1, 0), 2)
    assert not exact.in_cone(gens, (0, 1), 2)


def test_supporting_normals_quadrant():
    assert exact.supporting_normals([(1, 0), (0, 1), (1, 1)], 2) == [(0, 1), (1, 0)]


@given(square())
def test_det_matches_sympy(M):
    assert exact.det(M) == sympy.Matrix(M).det()


@given(square())
def test_inverse_roundtrip(M):
    d = exact.det(M)
    if d == 0:
        with pytest.raises(Exception):
            exact.inverse(M)
        return
    Mi = exact.inverse(M)
    assert exact.matmul(M, Mi) == exact.identity(len(M))
    assert exact.det(Mi) * d == 1


@given(rect())
def test_hnf_invariants(M):
    H, U = exact.hnf(M)
    assert exact.matmul(U, M) == H
    assert abs(exact.det(U)) == 1
    last = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            last = len(row)
            continue
        assert nz[0] > last
        assert row[nz[0]] > 0
        last = nz[0]


@given(rect())
def test_smith_invariants(M):
    S, P, Q = exact.smith(M)
    assert exact.matmul(exact.matmul(P, M), Q) == S
    assert abs(exact.det(P)) == 1 and abs(exact.det(Q)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[:len(nz)] == nz


@settings(max_examples=40)
@given(rect(max_m=3, max_k=4))
def test_invariant_factors_match_sympy(M):
    ours = exact.invariant_factors(M)
    snf = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    theirs = [abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0]
    assert ours == theirs


@given(rect())
def test_kernel_is_saturated_basis(M):
    K = exact.integer_kernel(M)
    n = len(M[0])
    assert len(K) == n - exact.rank(M)
    for v in K:
        assert all(x == 0 for x in exact.matvec(M, v))
    if K:
        # saturated: all invariant factors of the kernel basis are 1
        assert all(f == 1 for f in exact.invariant_factors(K))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=5).filter(any))
def test_primitive(v):
    p = exact.primitive(v)
    g = 0
    for x in p:
        g = gcd(g, x)
    assert g == 1
    ratio = {Fraction(a, b) for a, b in zip(v, p) if b}
    assert len(ratio) == 1 and ratio.pop() > 0


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_xgcd(a, b):
    g, x, y = exact.xgcd(a, b)
    assert g == gcd(a, b) and a * x + b * y == g


@given(square(max_n=3), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_normal_vector_is_determinant(M, x):
    n = len(M)
    if n < 2:
        return
    vecs = [row for row in M[:n - 1]]
    nv = exact.normal_vector(vecs, n)
    x = x[:n]
    assert exact.dot(nv, x) == exact.det(vecs + [x])
