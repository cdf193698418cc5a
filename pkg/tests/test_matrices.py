import random

import pytest
from hypothesis import given, settings, strategies as st

from finsix.fields import FieldSpec, QQ, F2, F3
from finsix.matrices import Matrix, ShapeMismatch, rank_by_span_enumeration


def test_field_parse_roundtrip():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("F2") == F2
    assert FieldSpec.parse("F17").p == 17
    with pytest.raises(ValueError):
        FieldSpec.parse("F4")
    with pytest.raises(ValueError):
        FieldSpec.parse("R")


def test_scalar_parsing():
    assert QQ.parse_scalar("3/2") * 2 == 3
    assert F3.parse_scalar("5") == 2
    assert QQ.format_scalar(QQ.parse_scalar("-7/3")) == "-7/3"


def test_rank_trivial_cases():
    assert Matrix.zero(QQ, 0, 0).rank() == 0
    m = Matrix.from_int_rows(F2, [[1, 1], [1, 1]])
    assert m.rank() == 1
    m = Matrix.from_int_rows(QQ, [[1, 1], [1, 1]])
    assert m.rank() == 1


def test_kernel_basis_cases():
    ident = Matrix.identity(QQ, 2)
    assert ident.kernel_basis().cols == 0
    z = Matrix.zero(QQ, 2, 3)
    kb = z.kernel_basis()
    assert kb.cols == 3 and kb.rank() == 3
    m = Matrix.from_int_rows(F2, [[1, 1]])
    kb = m.kernel_basis()
    # brute force over the 4 vectors of F_2^2: only (1,1) is in the kernel
    sols = [(a, b) for a in (0, 1) for b in (0, 1) if (a + b) % 2 == 0 and (a, b) != (0, 0)]
    assert sols == [(1, 1)]
    assert kb.cols == 1 and [kb.entries[0][0], kb.entries[1][0]] == [1, 1]


def test_solve_cases():
    ident = Matrix.identity(QQ, 3)
    b = Matrix.from_int_rows(QQ, [[1], [2], [3]])
    assert ident.solve(b) == b
    m = Matrix.from_int_rows(F2, [[1, 1]])
    x = m.solve(Matrix.from_int_rows(F2, [[1]]))
    # enumerate F_2^2: solutions are (1,0) and (0,1)
    assert x is not None and (m @ x) == Matrix.from_int_rows(F2, [[1]])
    assert tuple(x.col(0)) in {(1, 0), (0, 1)}
    zero = Matrix.zero(QQ, 1, 1)
    assert zero.solve(Matrix.from_int_rows(QQ, [[1]])) is None
    with pytest.raises(ShapeMismatch):
        m.solve(Matrix.from_int_rows(F2, [[1], [0]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 5), st.integers(1, 5))
def test_rank_matches_span_enumeration_f2(seed, rows, cols):
    rng = random.Random(seed)
    m = Matrix.from_int_rows(F2, [[rng.randrange(2) for _ in range(cols)] for _ in range(rows)])
    assert m.rank() == rank_by_span_enumeration(m)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_rank_plus_kernel_dims(seed):
    rng = random.Random(seed)
    field = rng.choice([QQ, F2, F3])
    rows, cols = rng.randrange(0, 5), rng.randrange(0, 5)
    m = Matrix.from_int_rows(field, [[rng.randrange(-3, 4) for _ in range(cols)] for _ in range(rows)])
    kb = m.kernel_basis()
    assert m.rank() + kb.cols == cols
    if kb.cols:
        assert (m @ kb).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_solve_consistency_f2(seed):
    rng = random.Random(seed)
    rows, cols = rng.randrange(1, 5), rng.randrange(1, 5)
    m = Matrix.from_int_rows(F2, [[rng.randrange(2) for _ in range(cols)] for _ in range(rows)])
    b = Matrix.from_int_rows(F2, [[rng.randrange(2)] for _ in range(rows)])
    x = m.solve(b)
    brute = None
    for mask in range(2 ** cols):
        v = Matrix.from_int_rows(F2, [[(mask >> i) & 1] for i in range(cols)])
        if (m @ v) == b:
            brute = v
            break
    if x is None:
        assert brute is None
    else:
        assert (m @ x) == b and brute is not None


def test_kron_and_block():
    a = Matrix.from_int_rows(QQ, [[1, 2], [3, 4]])
    b = Matrix.from_int_rows(QQ, [[0, 1]])
    k = a.kron(b)
    assert k.rows == 2 and k.cols == 4
    assert [int(v) for v in k.entries[0]] == [0, 1, 0, 2]
    g = Matrix.block(QQ, [[a, None], [None, a]])
    assert g.rows == 4 and g.rank() == 2 * a.rank()


def test_inverse():
    a = Matrix.from_int_rows(F3, [[1, 2], [0, 1]])
    inv = a.inverse()
    assert a @ inv == Matrix.identity(F3, 2)
    with pytest.raises(ValueError):
        Matrix.from_int_rows(QQ, [[1, 1], [1, 1]]).inverse()
