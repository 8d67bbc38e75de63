from fractions import Fraction

import pytest
import sympy as sp

from curvezeta.exceptions import DivisibilityError
from curvezeta.motivic import (
    ONE,
    U,
    U_INV,
    RationalFunction,
    TPoly,
    UPoly,
    ZetaForm,
    chi_ring,
    chi_units,
    class_In,
    class_J,
    class_units_jet,
    t_symbols,
)
from curvezeta.valuesemigroup import from_box, from_numerical_generators

T = sp.Symbol("T")


def test_upoly_arithmetic():
    p = U + 1
    assert p * (U - 1) == U**2 - 1
    assert 2 * U_INV - U_INV == U_INV
    assert 1 - U == -(U - 1)
    assert U * U_INV == 1
    assert (U - 1) ** 0 == ONE
    assert str(U**2 - 2 * U + 1) == "U^2 - 2 U + 1"
    assert str(U_INV - U.shift(-3)) == "U^-1 - U^-3"
    assert str(UPoly()) == "0"


def test_upoly_inverse_powers():
    assert U ** (-2) == UPoly.monomial(-2)
    assert (-U) ** (-1) == -U_INV
    with pytest.raises(DivisibilityError):
        _ = (U + 1) ** (-1)
    with pytest.raises(DivisibilityError):
        _ = (2 * U) ** (-1)


def test_upoly_eval_and_sympy():
    p = U_INV - UPoly.monomial(-2)
    assert p.eval(2) == Fraction(1, 4)
    assert p.eval(1) == 0
    u = sp.Symbol("U")
    assert sp.simplify(p.to_sympy() - (1 / u - 1 / u**2)) == 0


def test_divide_exact():
    assert (U**3 - U).divide_exact(U - 1) == U**2 + U
    assert (U.shift(-1) - U.shift(-2)).divide_exact(U - 1) == UPoly.monomial(-2)
    assert UPoly().divide_exact(U - 1).is_zero()
    with pytest.raises(DivisibilityError):
        (U**2 + 1).divide_exact(U - 1)
    with pytest.raises(DivisibilityError):
        U.divide_exact(2 * U - 2)
    with pytest.raises(DivisibilityError):
        U.divide_exact(UPoly())


def test_class_in_cusp():
    S = from_numerical_generators([2, 3])
    assert class_In(S.l_table, (0,), 1) == ONE
    assert class_In(S.l_table, (2,), 1) == U
    assert class_In(S.l_table, (3,), 1) == U


def test_class_in_two_branches():
    node = from_box((1, 1), [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)])
    assert class_In(node.l_table, (1, 1), 2) == U - 1
    ex92 = from_box((2, 2), [(0, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
    assert class_In(ex92.l_table, (1, 1), 2) == U


def test_class_in_vanishes_on_gaps():
    S = from_numerical_generators([2, 3])
    assert class_In(S.l_table, (1,), 1).is_zero()


def test_class_j_and_units():
    assert class_J(2, 2) == (U - 1) * U
    assert class_J(1, 1) == U
    assert class_J(0, 1) == ONE
    with pytest.raises(ValueError):
        class_J(0, 2)
    assert class_units_jet(1, (2,)) == (U - 1)
    assert class_units_jet(0, (0,)) == U - 1
    assert class_units_jet(2, (2, 2)) == (U - 1) * U


@pytest.mark.parametrize("delta", [1, 2, 3])
def test_chi_consistency(delta):
    assert chi_units(delta) == class_units_jet(delta, (2 * delta,)).shift(-2 * delta)
    assert chi_units(delta).divide_exact(chi_ring(delta)) == (U - 1) * U_INV
    assert chi_ring(delta) == UPoly.monomial(-delta)


def test_tpoly_factor_division():
    f = TPoly.factor(2, 0)
    p = TPoly.monomial(2, (0, 1), U) * f * f
    assert p.divide_by_factor(0) == TPoly.monomial(2, (0, 1), U) * f
    assert TPoly.one(2).divide_by_factor(0) is None
    assert TPoly.one(2).divide_by_factor(1) is None
    assert p.degree == 3
    assert TPoly(2).degree == -1


def test_tpoly_diagonal():
    p = TPoly(2, {(1, 0): U_INV, (0, 1): U_INV, (1, 1): 1})
    assert p.substitute_diagonal() == TPoly(1, {(1,): 2 * U_INV, (2,): 1})
    assert p.evaluate_diagonal() == 2 + U**2
    assert p.truncate(1) == TPoly(2, {(1, 0): U_INV, (0, 1): U_INV})
    with pytest.raises(ValueError):
        TPoly(2, {(1,): 1})


def test_zetaform_add_and_normalize():
    a = ZetaForm(TPoly.one(1), (1,))
    b = ZetaForm(TPoly.monomial(1, (1,), -U_INV), (1,))
    total = (a + b).normalize()
    assert total.denominator == (0,)
    assert total.numerator == TPoly.one(1)
    assert a.with_denominator((2,)) == a
    with pytest.raises(ValueError):
        a.with_denominator((0,))


def test_zetaform_zero_normalizes_to_polynomial():
    z = ZetaForm(TPoly(2), (1, 2)).normalize()
    assert z.denominator == (0, 0)
    assert z.numerator.is_zero()


def test_zetaform_equals_cross_multiplied():
    f = TPoly.factor(2, 1)
    a = ZetaForm(TPoly.one(2), (0, 1))
    b = ZetaForm(f * TPoly.factor(2, 0), (1, 2))
    assert a == b
    assert a != ZetaForm(TPoly.one(2), (1, 0))


def test_zetaform_diagonal():
    num = TPoly(2, {(0, 0): 1, (1, 0): -U_INV, (0, 1): -U_INV, (1, 1): U_INV})
    z = ZetaForm(num, (1, 1)).diagonal()
    assert z.nvars == 1
    assert z.denominator == (2,)
    assert z.numerator == TPoly(1, {(0,): 1, (1,): -2 * U_INV, (2,): U_INV})


def test_rational_function_normalizes():
    rf = RationalFunction(2 - 2 * T**2, 2 - 2 * T, [T])
    assert rf.denominator == 1
    assert rf.numerator == 1 + T
    assert rf.numerator_terms() == [((0,), 1), ((1,), 1)]
    assert rf == RationalFunction(1 + T, sp.Integer(1), [T])
    with pytest.raises(ZeroDivisionError):
        RationalFunction(T, sp.Integer(0), [T])


def test_rational_function_symbolic_denominator():
    q = sp.Symbol("q")
    rf = RationalFunction(1 - T + q * T**2, 1 - T, [T])
    assert rf.denominator_terms() == [((0,), 1), ((1,), -1)]
    assert rf.subs({q: 1}).numerator == 1 - T + T**2


def test_t_symbols():
    assert t_symbols(1) == (sp.Symbol("T"),)
    assert [str(t) for t in t_symbols(3)] == ["T1", "T2", "T3"]
