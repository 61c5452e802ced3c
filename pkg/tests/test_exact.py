import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instanton_lab.exact import (
    CHECK_PRIMES,
    ExactError,
    Matrix,
    as_rational,
    det,
    has_full_column_rank,
    integer_kernel,
    inverse,
    kernel_basis,
    kronecker,
    random_int_matrix,
    random_invertible,
    random_skew,
    random_symmetric,
    rank,
    rank_mod_p,
    solve,
)
from instanton_lab.forms import det_by_cofactors


def naive_rank(m: Matrix) -> int:
    """Plain Gaussian elimination with rational pivots (oracle)."""
    a = [list(r) for r in m.tolist()]
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


small_ints = st.integers(min_value=-4, max_value=4)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(Matrix)


def test_rank_trivial_cases():
    assert rank(Matrix.identity(4)) == 4
    assert rank(Matrix.zeros(3, 5)) == 0


def test_generic_skew_5x5_has_rank_4():
    rng = random.Random(3)
    for _ in range(10):
        a = random_skew(rng, 5, 9)
        assert rank(a) == naive_rank(a) == 4


@settings(max_examples=60, deadline=None)
@given(matrices(4, 5))
def test_rank_matches_naive_elimination(m):
    assert rank(m) == naive_rank(m)
    assert rank(m) == rank(m.T)


@settings(max_examples=30, deadline=None)
@given(matrices(4, 4), st.integers(0, 10**6))
def test_rank_invariant_under_invertible_multiplication(m, seed):
    rng = random.Random(seed)
    p, q = random_invertible(rng, 4), random_invertible(rng, 4)
    assert rank(p @ m @ q) == rank(m)


@settings(max_examples=40, deadline=None)
@given(matrices(3, 5))
def test_kernel_basis_contract(m):
    ker = kernel_basis(m)
    assert len(ker) == m.cols - rank(m)
    for v in ker:
        assert not any(m @ v)
    assert rank(Matrix(ker, cols=m.cols)) == len(ker) if ker else True


def test_kernel_basis_trivial_cases():
    assert kernel_basis(Matrix.identity(3)) == []
    assert len(kernel_basis(Matrix.zeros(2, 3))) == 3


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4))
def test_det_matches_cofactor_expansion(m):
    form = det_by_cofactors([m])
    assert det(m) == form((1,))
    assert (det(m) == 0) == (rank(m) < 4)


def test_inverse_and_solve():
    rng = random.Random(5)
    m = random_invertible(rng, 4, 3)
    assert m @ inverse(m) == Matrix.identity(4)
    b = (1, 2, 3, 4)
    x = solve(m, b)
    assert m @ x == tuple(Fraction(v) for v in b)
    assert solve(Matrix([[1, 1], [1, 1]]), (0, 1)) is None


def test_kronecker_conventions():
    assert kronecker(Matrix.identity(2), Matrix.identity(5)) == Matrix.identity(10)
    g = Matrix([[1, 2], [3, 4]])
    a = Matrix([[0, 1], [5, 0]])
    k = kronecker(g, a)
    assert k.submatrix([2, 3], [0, 1]) == a.scale(3)  # block (1, 0) = g[1, 0] * a


def test_kronecker_symmetric_times_skew_is_skew():
    rng = random.Random(1)
    k = kronecker(random_symmetric(rng, 3, 5), random_skew(rng, 5, 5))
    assert k.is_skew()
    assert k.T == -k


def test_kronecker_rank_and_mixed_product():
    rng = random.Random(2)
    for _ in range(5):
        g, a = random_int_matrix(rng, 3, 3, 2), random_int_matrix(rng, 3, 3, 2)
        c, d = random_int_matrix(rng, 3, 3, 2), random_int_matrix(rng, 3, 3, 2)
        assert rank(kronecker(g, a)) == rank(g) * rank(a)
        assert kronecker(g, a) @ kronecker(c, d) == kronecker(g @ c, a @ d)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        Matrix([[0.5]])
    assert as_rational("3/6") == Fraction(1, 2)


def test_ragged_matrix_rejected():
    with pytest.raises(ExactError):
        Matrix([[1, 2], [3]])


def test_matrix_json_roundtrip():
    m = Matrix([[Fraction(1, 3), -2], [0, Fraction(7, 2)]])
    assert m.to_json() == [["1/3", "-2"], ["0", "7/2"]]
    assert Matrix.from_json(m.to_json()) == m


def test_rank_mod_p_bounds_and_usually_matches_rank():
    rng = random.Random(12)
    for _ in range(60):
        m = random_int_matrix(rng, rng.randint(1, 6), rng.randint(1, 6), 5)
        r = rank(m)
        assert all(rank_mod_p(m, p) <= r for p in (2, 3) + CHECK_PRIMES)
        assert rank_mod_p(m, CHECK_PRIMES[0]) == r
    # rank drops modulo a prime dividing a determinant
    assert rank(Matrix([[2, 0], [0, 3]])) == 2 and rank_mod_p(Matrix([[2, 0], [0, 3]]), 3) == 1


def test_has_full_column_rank():
    assert has_full_column_rank(Matrix([[1, 2], [3, 4], [5, 6]]))
    assert not has_full_column_rank(Matrix([[1, 2], [2, 4], [3, 6]]))
    # singular only modulo the check primes would still be full rank over Q
    p = CHECK_PRIMES[0]
    assert has_full_column_rank(Matrix([[p, 0], [0, 1]]))


def _maximal_minor_gcd(vectors):
    k = len(vectors)
    g = 0
    for cols in itertools.combinations(range(len(vectors[0])), k):
        g = math.gcd(g, int(det(Matrix([[v[c] for c in cols] for v in vectors]))))
    return g


def test_integer_kernel_is_saturated_and_reduced():
    assert integer_kernel(Matrix.identity(3)) == []
    assert integer_kernel(Matrix([[2, -4]])) in ([[2, 1]], [[-2, -1]])
    m = Matrix([[2, 4, 6, 8]])
    basis = integer_kernel(m)
    assert len(basis) == 3
    assert all(m @ v == (0,) for v in basis)
    # the basis spans all integer solutions, not a sublattice of finite index
    assert _maximal_minor_gcd(basis) == 1
    rng = random.Random(3)
    m = random_int_matrix(rng, 3, 7, 9)
    basis = integer_kernel(m)
    assert len(basis) == 7 - rank(m)
    assert all(not any(m @ v) for v in basis)
    assert _maximal_minor_gcd(basis) == 1
