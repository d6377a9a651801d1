from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from vankampen.intsolve import SparseMatrix, smith_normal_form, solve_integer_system


def test_identity():
    res = solve_integer_system([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [4, -2, 7])
    assert res.solvable and res.witness == [4, -2, 7]


def test_parity_refutation():
    for ring in ("Z", "Z/2"):
        res = solve_integer_system([[2]], [1], ring)
        assert not res.solvable
        assert res.refutation.modulus == 2


def test_diagonal():
    res = solve_integer_system([[1, 0], [0, 3]], [5, 6])
    assert res.witness == [5, 2]


def test_zero_row_inconsistency():
    res = solve_integer_system([[1, 1], [1, 1]], [1, 2])
    assert not res.solvable and res.refutation.modulus == 0


def test_snf_shape():
    M = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
    D, U, V = smith_normal_form(M)
    assert [D[i][i] for i in range(4)] == [1, 10, 30, 0]
    assert (Matrix(U) * Matrix(M) * Matrix(V)).tolist() == D
    assert abs(Matrix(U).det()) == 1 and abs(Matrix(V).det()) == 1


# ---- independent oracles ----------------------------------------------------------


def _minor_gcd(M, k):
    g = 0
    for rows in combinations(range(len(M)), k):
        for cols in combinations(range(len(M[0])), k):
            g = gcd(g, int(Matrix([[M[i][j] for j in cols] for i in rows]).det()))
    return g


def z_solvable_oracle(A, c):
    """Ax = c has an integer solution iff A and [A|c] have the same rank r and
    the same gcd of r x r minors."""
    Ab = [row + [v] for row, v in zip(A, c)]
    r = Matrix(A).rank()
    if Matrix(Ab).rank() != r:
        return False
    if r == 0:
        return True
    return _minor_gcd(A, r) == _minor_gcd(Ab, r)


def z2_solvable_oracle(A, c):
    n = len(A[0])
    for x in product((0, 1), repeat=n):
        if all((sum(a * b for a, b in zip(row, x)) - v) % 2 == 0 for row, v in zip(A, c)):
            return True
    return False


systems = st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m),
    st.lists(st.integers(-4, 4), min_size=m, max_size=m),
)))


@settings(max_examples=200, derandomize=True, deadline=None)
@given(systems)
def test_z_against_determinantal_oracle(system):
    A, c = system
    res = solve_integer_system(A, c, "Z")
    assert res.solvable == z_solvable_oracle(A, c)
    if res.solvable:
        assert SparseMatrix.from_dense(A).matvec(res.witness) == c


@settings(max_examples=200, derandomize=True, deadline=None)
@given(systems)
def test_z2_against_brute_force(system):
    A, c = system
    assert solve_integer_system(A, c, "Z/2").solvable == z2_solvable_oracle(A, c)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_integer_system([[1, 2]], [1, 2])
