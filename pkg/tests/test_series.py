from fractions import Fraction

import pytest

from curvezeta.exceptions import InputError, PrecisionError
from curvezeta.series import SeriesElement, box, invert_unit, norm, nth_root, valuation


def series(branches, truncation):
    return SeriesElement.from_terms(branches, truncation)


def test_box_is_lexicographic():
    assert list(box((1, 1))) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(box((1,), (-1,))) == [(-1,), (0,), (1,)]
    assert norm((2, 3)) == 5


def test_multiplication_adds_valuations():
    a = series([{2: 1, 3: 1}, {1: 2}], (6, 6))
    b = series([{1: 1}, {0: 1, 1: 5}], (6, 6))
    assert valuation(a) == (2, 1)
    assert valuation(a * b) == (3, 1)
    assert (a * b).coefficient(0, 4) == 1


def test_truncation_is_the_minimum():
    a = series([{0: 1, 5: 1}], (8,))
    b = series([{0: 1}], (4,))
    assert (a + b).truncation == (4,)
    assert (a + b).branches == ({0: Fraction(2)},)


def test_valuation_of_zero_and_sum():
    assert valuation(series([{}, {}], (4, 4))) == (None, None)
    assert valuation(series([{2: 1, 3: 1}], (5,))) == (2,)


def test_branch_mismatch():
    with pytest.raises(InputError):
        series([{0: 1}], (3,)) * series([{0: 1}, {0: 1}], (3, 3))


def test_invert_unit():
    a = series([{0: 1, 1: 1}, {0: 2}], (5, 5))
    inverse = invert_unit(a)
    assert inverse.branches[0] == {0: 1, 1: -1, 2: 1, 3: -1, 4: 1, 5: -1}
    assert inverse.branches[1] == {0: Fraction(1, 2)}
    assert a * inverse == SeriesElement.one((5, 5))
    with pytest.raises(InputError):
        invert_unit(series([{1: 1}], (3,)))


def test_negative_power_inverts():
    a = series([{0: 1, 1: 1}], (4,))
    assert a ** (-2) * a**2 == SeriesElement.one((4,))


def test_sqrt_one_minus_t():
    root = nth_root(series([{0: 1, 1: -1}], (4,)), 2)
    assert root.branches[0] == {
        0: Fraction(1),
        1: Fraction(-1, 2),
        2: Fraction(-1, 8),
        3: Fraction(-1, 16),
        4: Fraction(-5, 128),
    }
    assert root**2 == series([{0: 1, 1: -1}], (4,))


def test_nth_root_exact_power():
    cube = series([{0: 1, 1: 3, 2: 3, 3: 1}], (6,))
    assert nth_root(cube, 3) == series([{0: 1, 1: 1}], (6,))
    assert nth_root(series([{0: 4}], (2,)), 2) == series([{0: 2}], (2,))


def test_nth_root_errors():
    with pytest.raises(InputError):
        nth_root(series([{0: 2}], (3,)), 2)
    with pytest.raises(InputError):
        nth_root(series([{0: -1}], (3,)), 2)
    with pytest.raises(InputError):
        nth_root(series([{1: 1}], (3,)), 2)


def test_retruncate():
    a = series([{0: 1, 3: 1}], (5,))
    assert a.retruncate((2,)) == series([{0: 1}], (2,))
    with pytest.raises(PrecisionError):
        a.retruncate((6,))


def test_stored_terms_are_validated():
    with pytest.raises(ValueError):
        SeriesElement(branches=({4: Fraction(1)},), truncation=(3,))
