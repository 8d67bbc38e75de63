from fractions import Fraction

from curvezeta import linalg


def test_rref_rational():
    rows, pivots = linalg.rref([[2, 4, 2], [1, 2, 3], [3, 6, 5]], 3)
    assert pivots == [0, 2]
    assert rows == [[1, 2, 0], [0, 0, 1]]
    assert all(isinstance(x, Fraction) for x in rows[0])


def test_rank_and_nullspace():
    matrix = [[1, 1, 0, 0], [0, 0, 1, -1]]
    assert linalg.rank(matrix, 4) == 2
    basis = linalg.nullspace(matrix, 4)
    assert len(basis) == 2
    for vec in basis:
        assert all(sum(a * b for a, b in zip(row, vec)) == 0 for row in matrix)


def test_nullspace_of_nothing_is_everything():
    assert linalg.nullspace([], 2) == [[1, 0], [0, 1]]


def test_rref_modular():
    # 2x + 2y over F_3 and over Q differ only in scaling
    rows, pivots = linalg.rref([[2, 2], [1, 4]], 2, modulus=3)
    assert pivots == [0]
    assert rows == [[1, 1]]
    assert linalg.rank([[1, 2], [2, 1]], 2) == 2
    assert linalg.rank([[1, 2], [2, 1]], 2, modulus=3) == 1


def test_in_span():
    rows, pivots = linalg.rref([[1, 0, 1], [0, 1, 1]], 3)
    assert linalg.in_span([2, 3, 5], rows, pivots)
    assert not linalg.in_span([0, 0, 1], rows, pivots)
    assert linalg.residue([0, 0, 1], rows, pivots) == [0, 0, 1]


def test_echelon_incremental():
    echelon = linalg.Echelon(3)
    assert echelon.add([0, 1, 1])
    assert echelon.add([1, 1, 0])
    assert not echelon.add([1, 2, 1])
    assert len(echelon) == 2
    assert echelon.pivots == [0, 1]
    assert echelon.rows == [[1, 0, -1], [0, 1, 1]]
    assert echelon.contains([1, 0, -1])
    assert not echelon.contains([0, 0, 1])
