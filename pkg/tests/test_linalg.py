from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bettilab.fields import GF, QQ, FieldMismatchError, FieldSpec
from bettilab.linalg import (
    Matrix,
    complement_in_span,
    complement_indices,
    hstack,
    image_basis,
    kernel_basis,
    rank,
    rref,
    solve,
    vstack,
)


def test_fieldspec_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        FieldSpec(6)
    with pytest.raises(ValueError):
        FieldSpec(1)
    FieldSpec(2)
    FieldSpec(32003)


def test_rref_hand_example_qq():
    # [[1,2,3],[2,4,6],[1,1,1]] row reduces to [[1,0,-1],[0,1,2],[0,0,0]]
    m = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    red = rref(m)
    assert red.rank == 2
    assert red.pivot_columns == (0, 1)
    expected = Matrix.from_rows(QQ, [[1, 0, -1], [0, 1, 2], [0, 0, 0]])
    assert red.matrix == expected


def test_rref_hand_example_f5():
    # over F_5: [[2,1],[1,3]] is invertible (det = 5 = 0 mod 5 -> actually check)
    # det = 2*3 - 1*1 = 5 == 0 mod 5, so rank 1
    m = Matrix.from_rows(GF(5), [[2, 1], [1, 3]])
    red = rref(m)
    assert red.rank == 1
    assert red.pivot_columns == (0,)
    # normalized first row: 2^{-1} = 3 mod 5 -> [1, 3]; second row eliminated
    assert red.matrix == Matrix.from_rows(GF(5), [[1, 3], [0, 0]])


def test_rref_idempotent():
    m = Matrix.from_rows(QQ, [[0, 2, 1], [1, 1, 1], [1, 3, 2]])
    r1 = rref(m)
    r2 = rref(r1.matrix)
    assert r1.matrix == r2.matrix
    assert r1.pivot_columns == r2.pivot_columns


def test_fraction_entries_are_exact():
    m = Matrix.from_rows(QQ, [["1/3", "1/6"], ["1/2", "1/4"]])
    red = rref(m)
    # second row is 3/2 times the first, so rank 1
    assert red.rank == 1
    assert red.matrix[0, 1] == Fraction(1, 2)


def test_kernel_annihilated_by_matrix():
    m = Matrix.from_rows(QQ, [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
    k = kernel_basis(m)
    assert m.ncols - rank(m) == k.ncols
    prod = m @ k
    assert prod.is_zero()


def test_kernel_of_zero_rows():
    m = Matrix.zeros(GF(7), 0, 3)
    k = kernel_basis(m)
    assert k.ncols == 3
    assert k == Matrix.identity(GF(7), 3)


def test_solve_consistent_and_inconsistent():
    a = Matrix.from_rows(QQ, [[1, 1], [0, 1], [1, 2]])
    b_good = Matrix.from_rows(QQ, [[3], [2], [5]])
    x = solve(a, b_good)
    assert x is not None
    assert a @ x == b_good
    b_bad = Matrix.from_rows(QQ, [[1], [0], [0]])
    assert solve(a, b_bad) is None


def test_complement_in_span_basic():
    field = QQ
    sub = Matrix.from_columns(field, [[1, 0, 0]])
    whole = Matrix.from_columns(field, [[1, 0, 0], [2, 0, 0], [0, 1, 0], [1, 1, 0]])
    idx = complement_indices(sub, whole)
    assert idx == (2,)
    comp = complement_in_span(sub, whole)
    assert rank(hstack([sub, comp])) == rank(whole)


def test_complement_requires_containment():
    field = QQ
    sub = Matrix.from_columns(field, [[0, 0, 1]])
    whole = Matrix.from_columns(field, [[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ValueError):
        complement_in_span(sub, whole)


def test_field_mismatch_rejected():
    a = Matrix.identity(QQ, 2)
    b = Matrix.identity(GF(5), 2)
    with pytest.raises(FieldMismatchError):
        _ = a @ b
    with pytest.raises(FieldMismatchError):
        _ = a + b


def test_matrices_are_immutable():
    m = Matrix.identity(QQ, 2)
    with pytest.raises(ValueError):
        m.entries()[0, 0] = Fraction(5)


def test_matmul_matches_integer_arithmetic_mod_p():
    # oracle: do the same product in unbounded integers, then reduce
    rng = np.random.default_rng(7)
    a_int = rng.integers(-50, 50, size=(6, 5))
    b_int = rng.integers(-50, 50, size=(5, 4))
    for p in (2, 3, 5, 32003):
        f = GF(p)
        a = Matrix(f, a_int)
        b = Matrix(f, b_int)
        prod = a @ b
        oracle = (a_int.astype(object) @ b_int.astype(object)) % p
        assert prod == Matrix(f, oracle)


def test_rank_mod_p_matches_integer_reduction():
    # diag(2, 6, 35): rank over QQ is 3, but drops for p dividing an entry
    d = Matrix.from_rows(QQ, [[2, 0, 0], [0, 6, 0], [0, 0, 35]])
    assert rank(d) == 3
    assert rank(Matrix.from_rows(GF(2), [[2, 0, 0], [0, 6, 0], [0, 0, 35]])) == 1
    assert rank(Matrix.from_rows(GF(3), [[2, 0, 0], [0, 6, 0], [0, 0, 35]])) == 2
    assert rank(Matrix.from_rows(GF(5), [[2, 0, 0], [0, 6, 0], [0, 0, 35]])) == 2
    assert rank(Matrix.from_rows(GF(7), [[2, 0, 0], [0, 6, 0], [0, 0, 35]])) == 2


small_entries = st.integers(min_value=-6, max_value=6)


@st.composite
def int_matrix(draw, max_dim=5):
    nr = draw(st.integers(min_value=1, max_value=max_dim))
    nc = draw(st.integers(min_value=1, max_value=max_dim))
    rows = draw(
        st.lists(
            st.lists(small_entries, min_size=nc, max_size=nc),
            min_size=nr,
            max_size=nr,
        )
    )
    return rows


@settings(max_examples=60, deadline=None)
@given(rows=int_matrix(), char=st.sampled_from([0, 2, 3, 5, 32003]))
def test_rank_nullity_property(rows, char):
    field = FieldSpec(char)
    m = Matrix.from_rows(field, rows)
    k = kernel_basis(m)
    assert rank(m) + k.ncols == m.ncols
    assert (m @ k).is_zero()
    # kernel columns are independent
    assert rank(k) == k.ncols


@settings(max_examples=40, deadline=None)
@given(rows=int_matrix(), char=st.sampled_from([0, 5]))
def test_rref_idempotent_property(rows, char):
    field = FieldSpec(char)
    m = Matrix.from_rows(field, rows)
    red = rref(m)
    again = rref(red.matrix)
    assert red.matrix == again.matrix
    assert red.pivot_columns == again.pivot_columns


@settings(max_examples=40, deadline=None)
@given(rows=int_matrix(max_dim=4))
def test_rank_over_fp_never_exceeds_rank_over_qq(rows):
    rq = rank(Matrix.from_rows(QQ, rows))
    for p in (2, 3, 5):
        rp = rank(Matrix.from_rows(GF(p), rows))
        assert rp <= rq


def test_image_basis_spans_columns():
    m = Matrix.from_rows(QQ, [[1, 2, 3], [1, 2, 3], [0, 0, 1]])
    im = image_basis(m)
    assert im.ncols == rank(m) == 2
    # every original column solvable against the image basis
    assert solve(im, m) is not None


def test_stack_shapes():
    a = Matrix.identity(GF(3), 2)
    b = Matrix.zeros(GF(3), 2, 3)
    assert hstack([a, b]).shape == (2, 5)
    c = Matrix.zeros(GF(3), 4, 2)
    assert vstack([a, c]).shape == (6, 2)
