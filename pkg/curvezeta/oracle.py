"""
Brute-force cross-checks.

- series_sum_oracle sums the defining series term by term, taylor_expand expands a closed form;
  both agree up to any degree.
- Over F_p the classes become counts: finite_field_ideal_count enumerates representatives of
  the unit classes mu and keeps those with t^n mu in O.
"""

import functools
import itertools
import logging
from collections.abc import Callable, Iterator, Sequence
from fractions import Fraction

import sympy as sp
from pydantic import BaseModel, ConfigDict

from curvezeta import linalg
from curvezeta.checks import CheckResult
from curvezeta.exceptions import OracleError, RingError
from curvezeta.localring import LocalRingModel
from curvezeta.motivic import RationalFunction, TPoly, UPoly, ZetaForm, class_In, class_J, t_symbols
from curvezeta.parse_utils import format_multiindex
from curvezeta.series import MultiIndex, add, box, leq, norm, ones
from curvezeta.valuesemigroup import SemigroupData, l_value_combinatorial

logger = logging.getLogger(__name__)


class TruncatedTPoly:
    """A TPoly with every term of total degree above `degree_bound` dropped."""

    __slots__ = ("degree_bound", "poly")

    def __init__(self, degree_bound: int, poly: TPoly) -> None:
        self.degree_bound = degree_bound
        self.poly = poly.truncate(degree_bound)

    @property
    def nvars(self) -> int:
        return self.poly.nvars

    def coefficient(self, exponent: Sequence[int]) -> UPoly:
        return self.poly.coefficient(exponent)

    def items(self) -> list[tuple[MultiIndex, UPoly]]:
        return self.poly.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedTPoly):
            return NotImplemented
        return self.degree_bound == other.degree_bound and self.poly == other.poly

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TruncatedTPoly({self.degree_bound}, {self.poly.items()})"


def _degree_box(d: int, degree: int) -> Iterator[MultiIndex]:
    return (n for n in box((degree,) * d) if norm(n) <= degree)


def series_sum_oracle(S: SemigroupData, degree: int) -> TruncatedTPoly:
    """sum over n in S, |n| <= degree, of [I_n] U^-|n| T^n"""
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    jacobian = class_J(S.delta, S.d)
    lvalue = functools.partial(l_value_combinatorial, S)
    terms: dict[MultiIndex, UPoly] = {}
    for n in _degree_box(S.d, degree):
        if not S.contains(n):
            continue
        if leq(S.conductor, n):
            value = jacobian
        else:
            # partial strata share the class of their corner f_J(m)
            value = class_In(lvalue, tuple(min(x, c) for x, c in zip(n, S.conductor)), S.d)
        terms[n] = value.shift(-norm(n))
    return TruncatedTPoly(degree, TPoly(S.d, terms))


def taylor_expand(z: ZetaForm, degree: int) -> TruncatedTPoly:
    result = z.numerator.truncate(degree)
    for i, multiplicity in enumerate(z.denominator):
        geometric = TPoly(
            z.nvars, {tuple(k if j == i else 0 for j in range(z.nvars)): UPoly.monomial(-k) for k in range(degree + 1)}
        )
        for _ in range(multiplicity):
            result = (result * geometric).truncate(degree)
    return TruncatedTPoly(degree, result)


def compare(a: TruncatedTPoly, b: TruncatedTPoly, name: str = "oracle_series") -> CheckResult:
    if a.degree_bound != b.degree_bound or a.nvars != b.nvars:
        raise ValueError(f"Cannot compare truncations {a.degree_bound} and {b.degree_bound}")
    for e in sorted(set(a.poly.terms) | set(b.poly.terms), key=lambda x: (norm(x), x)):
        if a.coefficient(e) != b.coefficient(e):
            return CheckResult.from_witness(
                name, f"T^({format_multiindex(e)}): {a.coefficient(e)} != {b.coefficient(e)}"
            )
    return CheckResult.from_witness(name, None)


class FieldConditions(BaseModel):
    """
    O/t^c O inside the jets below the conductor: `ring_rows` span it (reduced echelon over Q),
    `rows` are the linear conditions cutting it out.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int
    conductor: MultiIndex
    delta: int
    coords: tuple[tuple[int, int], ...]
    ring_rows: tuple[tuple[Fraction, ...], ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def reduce(self, p: int) -> "ReducedConditions":
        return ReducedConditions(self, p)


def conditions_from_model(model: LocalRingModel) -> FieldConditions:
    c = model.conductor()
    delta = model.delta()
    coords = tuple((e, i) for e, i in model.jets.coords.coords if e < c[i])
    columns = [model.jets.coords.index[x] for x in coords]
    projected = [[row[k] for k in columns] for row in model.jets.basis]
    ring_rows, _ = linalg.rref(projected, len(coords))
    rows = linalg.nullspace(ring_rows, len(coords))
    if len(rows) != delta:
        raise RingError(f"O/t^c has codimension {len(rows)} below the conductor, expected delta = {delta}")
    return FieldConditions(
        d=model.d,
        conductor=c,
        delta=delta,
        coords=coords,
        ring_rows=tuple(tuple(r) for r in ring_rows),
        rows=tuple(tuple(r) for r in rows),
    )


def _mod(value: Fraction, p: int) -> int:
    if value.denominator % p == 0:
        raise OracleError(f"p={p} divides the denominator of {value}: bad reduction")
    return value.numerator * pow(value.denominator, -1, p) % p


class ReducedConditions:
    """FieldConditions modulo a prime p large enough for the unit classes to stay polynomial."""

    def __init__(self, conditions: FieldConditions, p: int) -> None:
        if not sp.isprime(p):
            raise OracleError(f"{p} is not a prime")
        if p < max(conditions.conductor, default=0):
            raise OracleError(f"p={p} is below the conductor entries {conditions.conductor}")
        self.source = conditions
        self.p = p
        self.coords = conditions.coords
        self.index = {x: k for k, x in enumerate(self.coords)}
        ncols = len(self.coords)
        self.rows = [[_mod(x, p) for x in row] for row in conditions.rows]
        self.ring_rows, self.pivots = linalg.rref([[_mod(x, p) for x in row] for row in conditions.ring_rows], ncols, p)
        if linalg.rank(self.rows, ncols, p) != conditions.delta:
            raise OracleError(f"Conditions lose rank modulo {p}")
        if len(self.pivots) != ncols - conditions.delta:
            raise OracleError(f"O/t^c loses dimension modulo {p}")
        self.free = [k for k in range(ncols) if k not in set(self.pivots)]

    @property
    def d(self) -> int:
        return self.source.d

    @property
    def conductor(self) -> MultiIndex:
        return self.source.conductor

    def representative_count(self) -> int:
        zero_exponent = sum(1 for k in self.free if self.coords[k][0] == 0)
        return (self.p - 1) ** zero_exponent * self.p ** (len(self.free) - zero_exponent)

    def representatives(self) -> Iterator[list[int]]:
        """
        One unit jet per class of O^x: 1 on the first constant coordinate, 0 on the other
        pivots of O/t^c, anything on the free coordinates (nonzero at exponent 0).
        """
        choices = [range(1, self.p) if self.coords[k][0] == 0 else range(self.p) for k in self.free]
        base = [0] * len(self.coords)
        if (0, 0) in self.index:
            base[self.index[(0, 0)]] = 1
        for values in itertools.product(*choices):
            vec = list(base)
            for k, v in zip(self.free, values):
                vec[k] = v
            yield vec

    def satisfied(self, vec: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(row, vec)) % self.p == 0 for row in self.rows)

    def shifted(self, mu: Sequence[int], n: Sequence[int]) -> list[int]:
        """Jet of t^n mu below the conductor."""
        out = []
        for e, i in self.coords:
            source = (e - n[i], i)
            out.append(mu[self.index[source]] if e >= n[i] else 0)
        return out

    def product(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        out = []
        for e, i in self.coords:
            out.append(sum(a[self.index[(k, i)]] * b[self.index[(e - k, i)]] for k in range(e + 1)) % self.p)
        return out

    def normal_form(self, unit: Sequence[int]) -> tuple[int, ...]:
        """
        The representative in the class unit * O^x. Solving for v in O/t^c is triangular in the
        graded coordinate order with diagonal entries the constant terms of `unit`.
        """
        v = [0] * len(self.coords)
        for row, pc in zip(self.ring_rows, self.pivots):
            e, i = self.coords[pc]
            current = sum(unit[self.index[(k, i)]] * v[self.index[(e - k, i)]] for k in range(e + 1))
            target = 1 if (e, i) == (0, 0) else 0
            x = (target - current) * pow(unit[self.index[(0, i)]], -1, self.p) % self.p
            if x:
                v = [(a + x * b) % self.p for a, b in zip(v, row)]
        return tuple(self.product(unit, v))


def _budgeted(reduced: ReducedConditions, size: int, budget: int) -> None:
    if size > budget:
        raise OracleError(f"Enumeration of {size} jets over F_{reduced.p} exceeds the budget {budget}")


def finite_field_ideal_count(conditions: FieldConditions, n: Sequence[int], p: int, budget: int = 1_000_000) -> int:
    """#{classes mu : t^n mu in O} over F_p, for any n >= 0."""
    reduced = conditions.reduce(p)
    return _ideal_count(reduced, tuple(n), budget)


def _ideal_count(reduced: ReducedConditions, n: MultiIndex, budget: int) -> int:
    if len(n) != reduced.d or any(x < 0 for x in n):
        raise ValueError(f"Invalid multi-index {n} for {reduced.d} branches")
    _budgeted(reduced, reduced.representative_count(), budget)
    return sum(1 for mu in reduced.representatives() if reduced.satisfied(reduced.shifted(mu, n)))


def jacobian_class_count(conditions: FieldConditions, p: int, budget: int = 1_000_000) -> int:
    """Distinct normal forms among all unit jets below the conductor."""
    reduced = conditions.reduce(p)
    units = [k for k, (e, _) in enumerate(reduced.coords) if e == 0]
    size = (p - 1) ** len(units) * p ** (len(reduced.coords) - len(units))
    _budgeted(reduced, size, budget)
    choices = [range(1, p) if e == 0 else range(p) for e, _ in reduced.coords]
    forms = {reduced.normal_form(unit) for unit in itertools.product(*choices)}
    logger.debug("F_%d: %d unit jets, %d classes", p, size, len(forms))
    return len(forms)


def counting_series_oracle(
    conditions: FieldConditions, p: int, degree: int, budget: int = 1_000_000
) -> dict[int, Fraction]:
    """sum over |n| <= degree of #(I_n) p^-|n| T^|n|, as coefficients of T^k."""
    reduced = conditions.reduce(p)
    series = {k: Fraction(0) for k in range(degree + 1)}
    for n in _degree_box(reduced.d, degree):
        count = _ideal_count(reduced, n, budget)
        if count:
            series[norm(n)] += Fraction(count, p ** norm(n))
    return series


def _as_fraction(value: sp.Expr) -> Fraction:
    value = sp.nsimplify(value)
    if not value.is_Rational:
        raise ValueError(f"Coefficient {value} is not a rational number")
    return Fraction(int(value.p), int(value.q))


def rational_taylor(rf: RationalFunction, degree: int) -> dict[int, Fraction]:
    """Power series coefficients of a one-variable rational function with rational coefficients."""
    (t,) = rf.variables
    numerator = {k: _as_fraction(c) for (k,), c in rf.numerator_terms()}
    denominator = {k: _as_fraction(c) for (k,), c in rf.denominator_terms()}
    d0 = denominator.get(0, Fraction(0))
    if d0 == 0:
        raise ValueError(f"{rf} has a pole at {t} = 0")
    out: dict[int, Fraction] = {}
    for k in range(degree + 1):
        acc = numerator.get(k, Fraction(0)) - sum(
            (denominator[j] * out[k - j] for j in denominator if 0 < j <= k), Fraction(0)
        )
        out[k] = acc / d0
    return out


def check_finite_field(
    conditions: Callable[[], FieldConditions], S: SemigroupData, p: int, budget: int = 1_000_000
) -> CheckResult:
    """Counts over F_p against the classes at U = p on the box [0, c+1], and #J."""
    name = f"finite_field_p{p}"
    reduced = conditions().reduce(p)
    lvalue = functools.partial(l_value_combinatorial, S)
    jacobian = jacobian_class_count(reduced.source, p, budget)
    expected_jacobian = class_J(S.delta, S.d).eval(p)
    if jacobian != expected_jacobian:
        return CheckResult.from_witness(name, f"#J = {jacobian}, class gives {expected_jacobian}")
    for n in box(add(S.conductor, ones(S.d))):
        count = _ideal_count(reduced, n, budget)
        expected = class_In(lvalue, n, S.d).eval(p) if S.contains(n) else Fraction(0)
        if count != expected:
            return CheckResult.from_witness(name, f"#I_{n} = {count}, class gives {expected}")
    return CheckResult.from_witness(name, None)


def check_counting_series(
    conditions: Callable[[], FieldConditions], single: ZetaForm, p: int, degree: int, budget: int = 1_000_000
) -> CheckResult:
    """Counting series against the expansion of the single-variable U = p specialization."""
    name = f"counting_series_p{p}"
    counted = counting_series_oracle(conditions(), p, degree, budget)
    ts = t_symbols(1)
    numerator, denominator = single.to_sympy(sp.Integer(p), ts)
    expanded = rational_taylor(RationalFunction(numerator, denominator, ts), degree)
    for k in range(degree + 1):
        if counted[k] != expanded[k]:
            return CheckResult.from_witness(name, f"T^{k}: counted {counted[k]}, closed form {expanded[k]}")
    return CheckResult.from_witness(name, None)
