import random

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from paragroups.intmat import IntMatrix, abelian_invariants, determinant, relation_matrix, \
    smith_normal_form
from paragroups.parse import parse_presentation


def oracle_factors(rows):
    m = Matrix(rows)
    d = sympy_snf(m, domain=ZZ)
    return sorted((abs(d[i, i]) for i in range(min(m.shape))), key=lambda v: (v == 0, v))


def test_snf_examples():
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).invariant_factors == (1, 1, 1)
    assert smith_normal_form([[2, 0], [0, 3]]).invariant_factors == (1, 6)
    snf = smith_normal_form([[-3, 2, 0], [0, -3, 2], [-2, 0, 3]])
    assert snf.invariant_factors == (1, 1, 19)
    assert snf.order == 19


def test_snf_rectangular_and_zero():
    assert smith_normal_form([[0, 0], [0, 0]]).invariant_factors == (0, 0)
    assert smith_normal_form([[2, 4, 6]]).invariant_factors == (2,)
    assert smith_normal_form([[6], [4]]).invariant_factors == (2,)


matrices = st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@given(matrices)
def test_snf_matches_sympy(rows):
    factors = smith_normal_form(rows).invariant_factors
    assert list(factors) == oracle_factors(rows)
    nz = [d for d in factors if d]
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert all(d == 0 for d in factors[len(nz):])


@given(matrices, st.randoms(use_true_random=False))
def test_snf_invariant_under_permutations_and_signs(rows, rng):
    rows = [list(r) for r in rows]
    rng.shuffle(rows)
    perm = list(range(len(rows[0])))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in rows]
    flipped = [[s * r[j] for j in perm] for s, r in zip(signs, rows)]
    assert smith_normal_form(flipped) == smith_normal_form(rows)


def test_determinant_examples():
    assert determinant([[-2, 0, 3], [3, -2, 0], [0, 3, -2]]) == 19
    assert determinant([[1, 0], [0, 1]]) == 1
    assert determinant([]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0
    with pytest.raises(ValueError):
        determinant([[1, 2, 3]])


square = st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=n, max_size=n))


@given(square)
def test_determinant_matches_sympy_and_snf(rows):
    d = determinant(rows)
    assert d == Matrix(rows).det()
    if d:
        assert abs(d) == smith_normal_form(rows).order


def test_big_integers_exact():
    rng = random.Random(7)
    rows = [[rng.randint(-10 ** 30, 10 ** 30) for _ in range(6)] for _ in range(6)]
    assert determinant(rows) == Matrix(rows).det()


def test_relation_matrix_and_invariants():
    g1 = parse_presentation("<a,b | (a*[b,a])^3, b^3>")
    assert relation_matrix(g1).tolist() == [[3, 0], [0, 3]]
    assert relation_matrix(parse_presentation("<a | a^3>")).tolist() == [[3]]
    assert abelian_invariants(g1).invariant_factors == (3, 3)
    free = abelian_invariants(parse_presentation("<a,b | >"))
    assert free.invariant_factors == (0, 0) and free.free_rank == 2 and free.order is None


def test_intmatrix_shape_check():
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])
    assert IntMatrix.from_rows([[1, 2], [3, 4]]).shape == (2, 2)
