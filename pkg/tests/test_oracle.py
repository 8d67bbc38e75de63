import asyncio
from fractions import Fraction

import pytest

from curvezeta.checks import CheckStatus
from curvezeta.exceptions import OracleError
from curvezeta.motivic import U_INV, TPoly, UPoly
from curvezeta.oracle import (
    FieldConditions,
    TruncatedTPoly,
    compare,
    conditions_from_model,
    counting_series_oracle,
    finite_field_ideal_count,
    jacobian_class_count,
    series_sum_oracle,
    taylor_expand,
)
from curvezeta.valuesemigroup import from_box, from_numerical_generators
from curvezeta.zeta import ReportOptions, run_report, universal_zeta


@pytest.fixture()
def cusp_conditions(loaded):
    return conditions_from_model(loaded("cusp-conditions.json").model)


def test_series_oracle_cusp():
    S = from_numerical_generators([2, 3])
    oracle = series_sum_oracle(S, 4)
    expected = TPoly(1, {(0,): 1, (2,): U_INV, (3,): UPoly.monomial(-2), (4,): UPoly.monomial(-3)})
    assert oracle == TruncatedTPoly(4, expected)
    assert taylor_expand(universal_zeta(S), 4) == oracle


def test_series_oracle_node():
    S = from_box((1, 1), [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)])
    oracle = series_sum_oracle(S, 2)
    assert oracle.poly == TPoly(2, {(0, 0): 1, (1, 1): U_INV - UPoly.monomial(-2)})
    assert compare(taylor_expand(universal_zeta(S), 6), series_sum_oracle(S, 6)).status == CheckStatus.PASS


def test_series_oracle_ex92():
    S = from_box((2, 2), [(0, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
    assert compare(taylor_expand(universal_zeta(S), 7), series_sum_oracle(S, 7)).status == CheckStatus.PASS


def test_compare_reports_first_difference():
    a = TruncatedTPoly(3, TPoly(1, {(0,): 1, (2,): U_INV, (3,): 1}))
    b = TruncatedTPoly(3, TPoly(1, {(0,): 1, (3,): 2}))
    result = compare(a, b, name="probe")
    assert result.status == CheckStatus.FAIL
    assert result.witness == "T^(2): U^-1 != 0"
    with pytest.raises(ValueError):
        compare(a, TruncatedTPoly(2, TPoly(1)))
    with pytest.raises(ValueError):
        series_sum_oracle(from_numerical_generators([2, 3]), -1)


def test_cusp_conditions(cusp_conditions):
    assert cusp_conditions.conductor == (2,)
    assert cusp_conditions.delta == 1
    assert cusp_conditions.coords == ((0, 0), (1, 0))


def test_cusp_counts(cusp_conditions):
    assert [finite_field_ideal_count(cusp_conditions, (n,), 3) for n in range(3)] == [1, 0, 3]
    assert jacobian_class_count(cusp_conditions, 3) == 3
    assert jacobian_class_count(cusp_conditions, 5) == 5
    series = counting_series_oracle(cusp_conditions, 3, 4)
    assert series == {0: 1, 1: 0, 2: Fraction(1, 3), 3: Fraction(1, 9), 4: Fraction(1, 27)}


def test_ex92_counts(loaded):
    conditions = conditions_from_model(loaded("ex92-conditions.json").model)
    assert conditions.delta == 2
    assert finite_field_ideal_count(conditions, (1, 1), 3) == 3
    assert finite_field_ideal_count(conditions, (0, 0), 3) == 1
    assert finite_field_ideal_count(conditions, (1, 0), 3) == 0
    assert jacobian_class_count(conditions, 3) == 6


def test_numerical_semigroup_monomial_ring(loaded):
    field_model = loaded("cusp.json", field_model=True).field_model
    assert field_model is not None
    assert conditions_from_model(field_model).delta == 1
    assert loaded("cusp.json").field_model is None


def test_reduction_errors(cusp_conditions, loaded):
    with pytest.raises(OracleError, match="not a prime"):
        cusp_conditions.reduce(4)
    with pytest.raises(OracleError, match="budget"):
        finite_field_ideal_count(cusp_conditions, (2,), 3, budget=2)
    with pytest.raises(ValueError):
        finite_field_ideal_count(cusp_conditions, (1, 1), 3)
    s34 = conditions_from_model(loaded("s34.json").model)
    with pytest.raises(OracleError, match="below the conductor"):
        s34.reduce(5)


def test_bad_reduction():
    conditions = FieldConditions(
        d=1,
        conductor=(2,),
        delta=1,
        coords=((0, 0), (1, 0)),
        ring_rows=((Fraction(1), Fraction(0)),),
        rows=((Fraction(0), Fraction(1, 3)),),
    )
    with pytest.raises(OracleError, match="bad reduction"):
        conditions.reduce(3)
    assert conditions.reduce(5).representative_count() == 5


@pytest.mark.parametrize("name", ["cusp-conditions.json", "cusp-param.json", "ex92-conditions.json"])
def test_report_finite_field(loaded, name):
    data = loaded(name)
    options = ReportOptions(primes=[3], oracle_degree=4, kiyek=False, eles=False)
    report = asyncio.run(run_report(data.semigroup, options, model=data.model))
    found = {check.name: check.status for check in report.checks}
    assert found["finite_field_p3"] == CheckStatus.PASS
    assert found["counting_series_p3"] == CheckStatus.PASS
    assert found["l_agreement"] == CheckStatus.PASS
    assert found["stability"] == CheckStatus.PASS
    assert not report.failed


def test_report_finite_field_numerical(loaded):
    data = loaded("cusp.json", field_model=True)
    report = asyncio.run(run_report(data.semigroup, ReportOptions(primes=[2, 3]), field_model=data.field_model))
    found = {check.name: check.status for check in report.checks}
    assert found["finite_field_p2"] == CheckStatus.PASS
    assert found["counting_series_p3"] == CheckStatus.PASS


CATALOG = [
    "cusp.json",
    "cusp-conditions.json",
    "cusp-param.json",
    "cusp-line.json",
    "ex92-conditions.json",
    "ex92-param.json",
    "node.json",
    "node-conditions.json",
    "nostra345.json",
    "nostra345-undeclared.json",
    "regular.json",
    "regular-param.json",
    "s25.json",
    "s34.json",
    "tacnode.json",
]


@pytest.mark.parametrize("name", CATALOG)
def test_report_every_input(loaded, name):
    data = loaded(name, field_model=True)
    S = data.semigroup
    p = next(q for q in (3, 5, 7) if q >= max(S.conductor))
    options = ReportOptions(
        primes=[p],
        expect_gorenstein=data.description.expect_gorenstein,
        plane_origin=data.description.plane_origin,
    )
    report = asyncio.run(run_report(S, options, source=data.source, model=data.model, field_model=data.field_model))
    found = {check.name: check.status for check in report.checks}
    assert [check.witness for check in report.checks if check.failed] == []
    assert found["oracle_series"] == CheckStatus.PASS
    field_status = CheckStatus.NA if data.field_model is None else CheckStatus.PASS
    assert found[f"finite_field_p{p}"] == field_status
    assert found[f"counting_series_p{p}"] == field_status
    if data.model is not None:
        assert found["l_agreement"] == CheckStatus.PASS
        assert found["stability"] == CheckStatus.PASS
