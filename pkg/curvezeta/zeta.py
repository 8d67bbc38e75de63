"""
Assembly of the universal zeta function from a value semigroup, its specializations,
and the checks that relate them (functional equation, coefficient symmetry, duality of l).
"""

import asyncio
import functools
import logging
import time
from collections.abc import Callable
from fractions import Fraction

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field

from curvezeta import oracle
from curvezeta.checks import CheckResult, CheckStatus, gate_gorenstein
from curvezeta.exceptions import DivisibilityError
from curvezeta.localring import LocalRingModel, stability_check
from curvezeta.motivic import (
    U_SYMBOL,
    RationalFunction,
    TPoly,
    UPoly,
    ZetaForm,
    class_In,
    class_J,
    class_units_jet,
    t_symbols,
)
from curvezeta.parse_utils import Q, format_multiindex
from curvezeta.series import MultiIndex, add, box, leq, norm, ones, sub, unit
from curvezeta.valuesemigroup import (
    SemigroupData,
    b_sets,
    l_value_combinatorial,
    step_dim_combinatorial,
    under_conductor_elements,
)

logger = logging.getLogger(__name__)

CHECK_BATCH = 5


def class_of(S: SemigroupData, n: MultiIndex) -> UPoly:
    return class_In(functools.partial(l_value_combinatorial, S), n, S.d)


def _factors(d: int, indices: list[int]) -> TPoly:
    out = TPoly.one(d)
    for i in indices:
        out = out * TPoly.factor(d, i)
    return out


def universal_zeta(S: SemigroupData) -> ZetaForm:
    """
    Sum over the three strata of S, brought to the denominator prod_i (1 - U^-1 T_i):
    n < c, the partial strata {n_J >= c_J, n_rest = m} and n >= c.
    """
    d, c = S.d, S.conductor
    full = ones(d)
    numerator = TPoly(d)
    under = under_conductor_elements(S)
    everywhere = _factors(d, list(range(d)))
    for n in under:
        numerator = numerator + everywhere.scale(class_of(S, n).shift(-norm(n)), n)
    middle = 0
    for J, bset in b_sets(S).items():
        outside = _factors(d, [i for i in range(d) if i not in J])
        for m in bset.members:
            f = bset.f(m)
            numerator = numerator + outside.scale(class_of(S, f).shift(-norm(f)), f)
            middle += 1
    numerator = numerator + TPoly.monomial(d, c, class_J(S.delta, d).shift(-norm(c)))
    logger.debug("strata: %d below the conductor, %d partial, conductor %s", len(under), middle, c)
    return ZetaForm(numerator, full).normalize()


def integral_zeta(S: SemigroupData) -> ZetaForm:
    """
    The same function assembled from the measures of the strata, each carrying the class
    of the unit jets [pi] = class_units_jet, then rescaled by [pi]^-1 U^|c|.
    """
    d, c, delta = S.d, S.conductor, S.delta
    pi = class_units_jet(delta, c)
    partial_coefficient = (UPoly.monomial(1) - 1).shift(norm(c) - delta - 1)
    total = ZetaForm.polynomial(TPoly(d))
    for n in under_conductor_elements(S):
        term = TPoly.monomial(d, n, class_of(S, n) * pi.shift(-norm(add(n, c))))
        total = total + ZetaForm.polynomial(term)
    for J, bset in b_sets(S).items():
        denominator = tuple(1 if i in J else 0 for i in range(d))
        for m in bset.members:
            f = bset.f(m)
            term = TPoly.monomial(d, f, partial_coefficient * class_of(S, f).shift(-norm(c) - norm(f)))
            total = total + ZetaForm(term, denominator)
    total = total + ZetaForm(TPoly.monomial(d, c, class_J(delta, d) * pi.shift(-2 * norm(c))), ones(d))
    rescaled = TPoly(d, {e: coeff.divide_exact(pi).shift(norm(c)) for e, coeff in total.numerator.items()})
    return ZetaForm(rescaled, total.denominator).normalize()


def single_variable(z: ZetaForm) -> ZetaForm:
    return z.diagonal()


def poincare_series(z: ZetaForm, delta: int) -> ZetaForm:
    return z.scale_by(UPoly.monomial(-delta - 1))


def _u_value(at: Fraction | int | sp.Basic) -> sp.Basic:
    if isinstance(at, sp.Basic):
        return at
    at = Fraction(at)
    if at == 0:
        raise ValueError("U cannot be specialized at 0")
    return sp.Rational(at.numerator, at.denominator)


def specialize_U(z: ZetaForm, at: Fraction | int | sp.Basic) -> RationalFunction:
    """U -> 1, U -> a rational, or U -> q symbolically."""
    ts = t_symbols(z.nvars)
    numerator, denominator = z.to_sympy(_u_value(at), ts)
    return RationalFunction(numerator, denominator, ts)


def monodromy_zeta(S: SemigroupData) -> RationalFunction:
    return specialize_U(single_variable(universal_zeta(S)), 1)


def cartier_local_factor(z: ZetaForm, q: Fraction | int | sp.Basic = Q) -> RationalFunction:
    """Single-variable U = q specialization with the q^-1 T twist undone (T -> qT)."""
    value = _u_value(q)
    specialized = specialize_U(single_variable(z), value)
    (t,) = specialized.variables
    return specialized.subs({t: value * t})


def full_numerator(z: ZetaForm) -> TPoly:
    """Numerator over prod_i (1 - U^-1 T_i), each factor once."""
    return z.with_denominator(ones(z.nvars)).numerator


def _label(e: MultiIndex) -> str:
    return f"T^({format_multiindex(e)})"


def _first_term(expr: sp.Expr, ts: tuple[sp.Symbol, ...]) -> str:
    poly = sp.Poly(expr, *ts)
    e, coeff = min(poly.terms())
    return f"{_label(tuple(int(x) for x in e))} differs by {sp.simplify(coeff)}"


def check_functional_equation(z: ZetaForm, S: SemigroupData) -> CheckResult:
    """
    Z(UT) = U^(delta-d) T^(c-1) prod(1 - U T_i)/prod(T_i - 1) Z(1/T), tested on the cleared
    numerator of the difference.
    """
    u = U_SYMBOL
    ts = t_symbols(z.nvars)
    numerator, denominator = z.to_sympy(u, ts)
    value = numerator / denominator
    lhs = value.subs({t: u * t for t in ts}, simultaneous=True)
    inverted = value.subs({t: 1 / t for t in ts}, simultaneous=True)
    factor = u ** (S.delta - S.d) * sp.Mul(*(t ** (ci - 1) * (1 - u * t) / (t - 1) for t, ci in zip(ts, S.conductor)))
    difference, _ = sp.fraction(sp.together(lhs - factor * inverted))
    difference = sp.expand(difference)
    if difference == 0:
        return CheckResult.from_witness("functional_equation", None)
    return CheckResult.from_witness("functional_equation", _first_term(difference, ts))


def check_coeff_symmetry(z: ZetaForm, S: SemigroupData) -> CheckResult:
    """a_i = a_(c-i) U^(delta - |i|), a_0 = 1, a_c = U^-delta, degree |c|."""
    name = "coefficient_symmetry"
    c, delta = S.conductor, S.delta
    numerator = full_numerator(z)
    for e, _ in numerator.items():
        if not leq(e, c):
            return CheckResult.from_witness(name, f"{_label(e)} lies beyond the conductor {c}")
    if numerator.coefficient((0,) * S.d) != 1:
        return CheckResult.from_witness(name, f"a_0 = {numerator.coefficient((0,) * S.d)} instead of 1")
    if numerator.coefficient(c) != UPoly.monomial(-delta):
        return CheckResult.from_witness(name, f"a_c = {numerator.coefficient(c)} instead of U^{-delta}")
    for e in box(c):
        left = numerator.coefficient(e)
        right = numerator.coefficient(sub(c, e)).shift(delta - norm(e))
        if left != right:
            return CheckResult.from_witness(name, f"a at {_label(e)} is {left}, mirror gives {right}")
    if numerator.degree != norm(c):
        return CheckResult.from_witness(name, f"degree {numerator.degree} instead of {norm(c)}")
    return CheckResult.from_witness(name, None)


def check_kiyek(S: SemigroupData) -> CheckResult:
    """step(n, i) + step(c - n - e_i, i) = 1 for n in [-1, c+1]."""
    if not S.is_gorenstein:
        return CheckResult.not_applicable("kiyek", "not Gorenstein")
    c = S.conductor
    for n in box(add(c, ones(S.d)), (-1,) * S.d):
        for i in range(S.d):
            mirrored = sub(sub(c, n), unit(S.d, i))
            total = step_dim_combinatorial(S, n, i) + step_dim_combinatorial(S, mirrored, i)
            if total != 1:
                return CheckResult.from_witness("kiyek", f"n={n}, direction {i + 1}: sum {total}")
    return CheckResult.from_witness("kiyek", None)


def check_eles(S: SemigroupData) -> CheckResult:
    """l(c - n) - l(n) = delta - |n| on [0, c]."""
    if not S.is_gorenstein:
        return CheckResult.not_applicable("eles", "not Gorenstein")
    c = S.conductor
    for n in box(c):
        got = l_value_combinatorial(S, sub(c, n)) - l_value_combinatorial(S, n)
        if got != S.delta - norm(n):
            return CheckResult.from_witness("eles", f"n={n}: l(c-n) - l(n) = {got}, expected {S.delta - norm(n)}")
    return CheckResult.from_witness("eles", None)


def check_monodromy_fe(zeta_f: RationalFunction, S: SemigroupData) -> CheckResult:
    """zeta(T) = (-1)^d T^(|c|-d) zeta(1/T)"""
    if not S.is_gorenstein:
        return CheckResult.not_applicable("monodromy_fe", "not Gorenstein")
    (t,) = zeta_f.variables
    value = zeta_f.as_expr()
    mirrored = (-1) ** S.d * t ** (norm(S.conductor) - S.d) * value.subs(t, 1 / t)
    difference, _ = sp.fraction(sp.together(value - mirrored))
    difference = sp.expand(difference)
    if difference == 0:
        return CheckResult.from_witness("monodromy_fe", None)
    return CheckResult.from_witness("monodromy_fe", f"difference numerator {difference}")


def check_l_agreement(model: LocalRingModel, S: SemigroupData) -> CheckResult:
    for n in box(add(S.conductor, ones(S.d))):
        ring, combinatorial = model.l_value(n), l_value_combinatorial(S, n)
        if ring != combinatorial:
            return CheckResult.from_witness("l_agreement", f"l{n}: rank {ring}, semigroup {combinatorial}")
    return CheckResult.from_witness("l_agreement", None)


def check_stability(model: LocalRingModel) -> CheckResult:
    report = stability_check(model)
    return CheckResult.from_witness("stability", None if report.stable else "; ".join(report.drift))


def _degree_bound(z: ZetaForm, S: SemigroupData) -> CheckResult:
    degree = full_numerator(z).degree
    witness = None if degree <= norm(S.conductor) else f"degree {degree} > |c| = {norm(S.conductor)}"
    return CheckResult.from_witness("degree_bound", witness)


def _evaluation(name: str, value: UPoly, expected: UPoly) -> CheckResult:
    return CheckResult.from_witness(name, None if value == expected else f"{value} instead of {expected}")


def _assembly_agreement(z: ZetaForm, S: SemigroupData) -> CheckResult:
    other = integral_zeta(S)
    if z.equals(other):
        return CheckResult.from_witness("assembly_agreement", None)
    terms = (full_numerator(z) - full_numerator(other)).items()
    if not terms:
        return CheckResult.from_witness("assembly_agreement", f"denominators {z.denominator} and {other.denominator}")
    e, coeff = terms[0]
    return CheckResult.from_witness("assembly_agreement", f"{_label(e)} differs by {coeff}")


def _class_divisibility(S: SemigroupData) -> CheckResult:
    jacobian = class_J(S.delta, S.d)
    for n in box(add(S.conductor, ones(S.d))):
        if not S.contains(n):
            continue
        try:
            value = class_of(S, n)
        except DivisibilityError as e:
            return CheckResult.from_witness("class_divisibility", f"class at {n}: {e}")
        if leq(S.conductor, n) and value != jacobian:
            return CheckResult.from_witness("class_divisibility", f"class at {n} is {value}, not [J] = {jacobian}")
    return CheckResult.from_witness("class_divisibility", None)


def _specialization_coherence(z: ZetaForm) -> CheckResult:
    symbolic = specialize_U(z, Q).subs({Q: 1})
    witness = None if symbolic.equals(specialize_U(z, 1)) else "U = q followed by q -> 1 differs from U = 1"
    return CheckResult.from_witness("specialization_coherence", witness)


class ReportOptions(BaseModel):
    functional_equation: bool = True
    symmetry: bool = True
    kiyek: bool = True
    eles: bool = True
    oracle: bool = True
    oracle_degree: int | None = Field(default=None, ge=0)
    oracle_extra_degree: int = Field(default=5, ge=0)
    primes: list[int] = Field(default_factory=list)
    ring_checks: bool = True
    finite_field_budget: int = Field(default=1_000_000, ge=1)
    concurrent: bool = True
    expect_gorenstein: bool | None = None
    plane_origin: bool | None = None


class ZetaReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    source: str = ""
    semigroup: SemigroupData
    truncation: MultiIndex | None = None
    zeta: ZetaForm
    single: ZetaForm
    poincare: ZetaForm
    euler_specialization: RationalFunction
    monodromy: RationalFunction | None = None
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(check.failed for check in self.checks)


def _timed(name: str, func: Callable[[], CheckResult]) -> Callable[[], CheckResult]:
    def run() -> CheckResult:
        start = time.perf_counter()
        result = func()
        elapsed = time.perf_counter() - start
        logger.debug("check %s: %s in %.3fs", name, result.status, elapsed)
        return result.model_copy(update={"seconds": elapsed})

    return run


def _plan(
    S: SemigroupData,
    z: ZetaForm,
    single: ZetaForm,
    poincare: ZetaForm,
    euler: RationalFunction,
    options: ReportOptions,
    model: LocalRingModel | None,
    field_model: LocalRingModel | None,
) -> dict[str, Callable[[], CheckResult]]:
    d, delta, gorenstein = S.d, S.delta, S.is_gorenstein
    jacobian = class_J(delta, d)

    def gated(func: Callable[[], CheckResult]) -> Callable[[], CheckResult]:
        return lambda: gate_gorenstein(func(), gorenstein, options.expect_gorenstein)

    plan: dict[str, Callable[[], CheckResult]] = {
        "degree_bound": lambda: _degree_bound(z, S),
        "evaluation_identity": lambda: _evaluation(
            "evaluation_identity", full_numerator(z).evaluate_diagonal(), jacobian
        ),
        "single_evaluation_identity": lambda: _evaluation(
            "single_evaluation_identity", single.with_denominator((d,)).numerator.evaluate_diagonal(), jacobian
        ),
        "poincare_evaluation": lambda: _evaluation(
            "poincare_evaluation", full_numerator(poincare).evaluate_diagonal(), jacobian.shift(-delta - 1)
        ),
        "assembly_agreement": lambda: _assembly_agreement(z, S),
        "class_divisibility": lambda: _class_divisibility(S),
        "specialization_coherence": lambda: _specialization_coherence(z),
        "monodromy_fe": lambda: check_monodromy_fe(euler, S),
    }
    if options.functional_equation:
        plan["functional_equation"] = gated(lambda: check_functional_equation(z, S))
    if options.symmetry:
        plan["coefficient_symmetry"] = gated(lambda: check_coeff_symmetry(z, S))
    if options.kiyek:
        plan["kiyek"] = lambda: check_kiyek(S)
    if options.eles:
        plan["eles"] = lambda: check_eles(S)
    degree = options.oracle_degree
    if degree is None:
        degree = norm(S.conductor) + options.oracle_extra_degree
    if options.oracle:
        plan["oracle_series"] = lambda: oracle.compare(
            oracle.taylor_expand(z, degree), oracle.series_sum_oracle(S, degree), name="oracle_series"
        )
    if model is not None and options.ring_checks:
        plan["l_agreement"] = lambda: check_l_agreement(model, S)
        plan["stability"] = lambda: check_stability(model)
    conditions = functools.cache(lambda: oracle.conditions_from_model(field_model))
    for p in options.primes:
        if field_model is None:
            plan[f"finite_field_p{p}"] = functools.partial(
                CheckResult.not_applicable, f"finite_field_p{p}", "no ring model for this input"
            )
            plan[f"counting_series_p{p}"] = functools.partial(
                CheckResult.not_applicable, f"counting_series_p{p}", "no ring model for this input"
            )
            continue
        plan[f"finite_field_p{p}"] = functools.partial(
            oracle.check_finite_field, conditions, S, p, options.finite_field_budget
        )
        plan[f"counting_series_p{p}"] = functools.partial(
            oracle.check_counting_series, conditions, single, p, degree, options.finite_field_budget
        )
    return {name: _timed(name, func) for name, func in plan.items()}


async def run_report(
    S: SemigroupData,
    options: ReportOptions | None = None,
    source: str = "",
    model: LocalRingModel | None = None,
    field_model: LocalRingModel | None = None,
) -> ZetaReport:
    """
    Assemble every form derived from S and run the selected checks. Checks are independent;
    with `options.concurrent` they run in worker threads, a few at a time.
    """
    options = options or ReportOptions()
    field_model = field_model if field_model is not None else model
    z = universal_zeta(S)
    single = single_variable(z)
    poincare = poincare_series(z, S.delta)
    euler = specialize_U(single, 1)
    plan = _plan(S, z, single, poincare, euler, options, model, field_model)
    names = sorted(plan)
    results: list[CheckResult] = []
    if options.concurrent:
        batches = [names[i : i + CHECK_BATCH] for i in range(0, len(names), CHECK_BATCH)]
        for batch in batches:
            results.extend(await asyncio.gather(*[asyncio.to_thread(plan[name]) for name in batch]))
    else:
        results = [plan[name]() for name in names]
    failed = [r.name for r in results if r.status == CheckStatus.FAIL]
    if failed:
        logger.info("failed checks: %s", ", ".join(failed))
    return ZetaReport(
        source=source,
        semigroup=S,
        truncation=model.truncation if model is not None else None,
        zeta=z,
        single=single,
        poincare=poincare,
        euler_specialization=euler,
        monodromy=euler if options.plane_origin else None,
        checks=sorted(results, key=lambda r: r.name),
    )
