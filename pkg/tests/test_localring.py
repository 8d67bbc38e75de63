from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from curvezeta.exceptions import PrecisionError, RingError
from curvezeta.localring import (
    build_from_conditions,
    build_from_generators,
    resolve_model,
    semigroup_box,
    stability_check,
)
from curvezeta.series import SeriesElement

EX92 = [[(1, 0, Fraction(1)), (2, 0, Fraction(-1))], [(1, 1, Fraction(1)), (2, 1, Fraction(-1))]]


def monomials(*exponents):
    def factory(truncation):
        return [SeriesElement.monomial((e,), truncation) for e in exponents]

    return factory


def test_cusp_from_conditions():
    model = build_from_conditions([[(1, 1, Fraction(1))]], 1, (8,))
    assert model.delta() == 1
    assert model.conductor() == (2,)
    assert [model.l_value((n,)) for n in range(5)] == [0, 1, 1, 2, 3]
    assert model.step_dim((1,), 0) == 0
    assert model.contains_valuation((2,))
    assert not model.contains_valuation((1,))


def test_cusp_from_generators():
    model = build_from_generators(monomials(2, 3), (8,))
    assert model.delta() == 1
    assert model.conductor() == (2,)
    assert semigroup_box(model).elements() == [(0,), (2,), (3,)]


def test_ex92_from_conditions():
    model = build_from_conditions(EX92, 2, (8, 8))
    assert model.delta() == 2
    assert model.conductor() == (2, 2)
    assert model.l_value((1, 1)) == 1
    assert model.l_value((2, 2)) == 2
    S = semigroup_box(model)
    assert S.elements() == [(0, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
    assert S.is_gorenstein


def test_nth_root_parametrization_matches_conditions(loaded):
    by_param = loaded("ex92-param.json")
    by_conditions = loaded("ex92-conditions.json")
    assert by_param.semigroup == by_conditions.semigroup


def test_cusp_line_semigroup():
    def factory(truncation):
        return [
            SeriesElement.from_terms([{2: 1}, {1: 1}], truncation),
            SeriesElement.from_terms([{3: 1}, {1: 1}], truncation),
        ]

    model = resolve_model(lambda n: build_from_generators(factory, n), 2)
    S = semigroup_box(model)
    assert S.conductor == (4, 2)
    assert S.delta == 3
    assert S.is_gorenstein
    assert S.elements() == [(0, 0), (2, 1), (2, 2), (2, 3), (3, 1), (4, 2), (4, 3), (5, 2), (5, 3)]


def test_l_value_needs_margin():
    model = build_from_conditions([[(1, 1, Fraction(1))]], 1, (4,))
    assert model.l_value((4,)) == 3
    with pytest.raises(PrecisionError):
        model.l_value((5,))


def test_conditions_not_closed():
    # t is allowed but t^2 is not
    with pytest.raises(RingError):
        build_from_conditions([[(1, 2, Fraction(1))]], 1, (6,))


def test_not_local():
    with pytest.raises(RingError):
        build_from_conditions([], 2, (4, 4))


def test_invalid_condition_branch():
    with pytest.raises(RingError):
        build_from_conditions([[(3, 0, Fraction(1))]], 2, (4, 4))


def test_condition_beyond_truncation():
    with pytest.raises(PrecisionError):
        build_from_conditions([[(1, 9, Fraction(1))]], 1, (8,))


def test_zero_divisor_generator():
    def factory(truncation):
        return [SeriesElement.from_terms([{1: 1}, {}], truncation)]

    with pytest.raises(PrecisionError):
        build_from_generators(factory, (6, 6))


def test_stability():
    report = stability_check(build_from_generators(monomials(2, 3), (8,)))
    assert report.stable
    assert report.rebuilt_truncation == (18,)
    assert report.drift == []


def test_resolve_doubles_until_stable():
    model = resolve_model(lambda n: build_from_generators(monomials(5, 7), n), 1, start=4)
    assert model.conductor() == (24,)
    assert model.truncation[0] >= 27


def test_under_truncated_is_flagged():
    with pytest.raises(PrecisionError):
        resolve_model(lambda n: build_from_generators(monomials(3, 4), n), 1, truncation=(4,))


def test_resolve_gives_up():
    with pytest.raises(PrecisionError):
        resolve_model(lambda n: build_from_generators(monomials(5, 7), n), 1, start=2, max_norm=10)


@pytest.mark.parametrize("truncation", [(1,), (2,)])
def test_regular_point_small_truncation(truncation):
    model = resolve_model(lambda n: build_from_generators(monomials(1), n), 1, truncation=truncation)
    assert stability_check(model).stable
    S = semigroup_box(model)
    assert S.conductor == (0,)
    assert S.delta == 0
    assert S.elements() == [(0,), (1,)]


def test_semigroup_box_at_smallest_truncation():
    # l up to c+1 is all the box needs
    model = build_from_generators(monomials(2, 3), (3,))
    assert semigroup_box(model).elements() == [(0,), (2,), (3,)]
    with pytest.raises(PrecisionError):
        semigroup_box(build_from_generators(monomials(2, 3), (2,)))


def test_conductor_concurrent_calls():
    model = build_from_generators(monomials(3, 4), (14,))
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda _: model.conductor(), range(8)))
    assert results == [(6,)] * 8
