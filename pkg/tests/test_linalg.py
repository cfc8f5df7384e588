from fractions import Fraction

from hypothesis import given, strategies as st

from askeywilson.linalg import ColumnSolver, SparseMatrix, nullspace, rank, solve_columns
from askeywilson.ring import Q, QINV

small = st.integers(-3, 3)
matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=5))


def test_laurent_entries():
    m = SparseMatrix.from_dense([[Q, 0], [0, QINV]])
    assert (m @ m.scale(QINV))[0, 0] == Q
    assert (m @ m)[1, 1] == QINV ** 2


def test_zero_entries_dropped():
    m = SparseMatrix.from_dense([[0, 1], [0, 0]])
    assert m.nnz() == 1
    assert (m - m).is_zero()


def test_kron_shape():
    a = SparseMatrix.identity(2)
    b = SparseMatrix.from_dense([[1, 2, 3]])
    assert a.kron(b).shape == (2, 6)


@given(matrices)
def test_rank_nullity(rows):
    n = len(rows[0])
    ns = nullspace(rows)
    assert rank(rows) + len(ns) == n
    for v in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@given(matrices, st.lists(small, min_size=4, max_size=4))
def test_solve_reproduces_target(rows, x):
    n = len(rows[0])
    cols = [list(c) for c in zip(*rows)]
    target = [sum(r[k] * x[k] for k in range(n)) for r in rows]
    sol, unique = solve_columns(cols, target)
    assert [sum(r[k] * sol[k] for k in range(n)) for r in rows] == target
    assert unique == (rank(rows) == n)


def test_solve_inconsistent():
    assert solve_columns([[1, 1]], [1, 2]) is None


def test_column_solver():
    cols = [[1, 0, 1], [0, 1, 1]]
    s = ColumnSolver(cols)
    assert s.unique and s.rank == 2
    assert s.solve([2, 3, 5]) == [2, 3]
    assert s.solve([2, 3, 4]) is None
