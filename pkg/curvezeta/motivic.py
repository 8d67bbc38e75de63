"""
Coefficient algebra of the zeta functions.

UPoly      Laurent polynomials in U (the class of the affine line) with integer coefficients
TPoly      polynomials in T1..Td with UPoly coefficients
ZetaForm   TPoly over a product of factors (1 - U^-1 T_i), kept factored
RationalFunction  a sympy numerator/denominator pair once U has been specialized
"""

import itertools
import logging
from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction
from typing import TypeAlias, Union

import sympy as sp

from curvezeta.exceptions import DivisibilityError
from curvezeta.series import MultiIndex, add, norm

logger = logging.getLogger(__name__)

U_SYMBOL = sp.Symbol("U")


def t_symbols(nvars: int) -> tuple[sp.Symbol, ...]:
    if nvars == 1:
        return (sp.Symbol("T"),)
    return tuple(sp.Symbol(f"T{i + 1}") for i in range(nvars))


class UPoly:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | None = None) -> None:
        self._terms: dict[int, int] = {int(e): int(c) for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "UPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, value: int) -> "UPoly":
        return cls({0: value})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[int, int]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def min_exponent(self) -> int:
        return min(self._terms)

    @property
    def max_exponent(self) -> int:
        return max(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = UPoly.constant(other)
        if not isinstance(other, UPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "UPoly | int") -> "UPoly":
        other = _upoly(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return UPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "UPoly | int") -> "UPoly":
        return self + (-_upoly(other))

    def __rsub__(self, other: int) -> "UPoly":
        return _upoly(other) - self

    def __mul__(self, other: "UPoly | int") -> "UPoly":
        other = _upoly(other)
        out: dict[int, int] = {}
        for (ea, ca), (eb, cb) in itertools.product(self._terms.items(), other._terms.items()):
            out[ea + eb] = out.get(ea + eb, 0) + ca * cb
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UPoly":
        if k < 0:
            if len(self._terms) != 1:
                raise DivisibilityError(f"Only monomials are invertible, not {self}")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise DivisibilityError(f"{self} is not invertible over the integers")
            return UPoly.monomial(e * k, c ** (-k))
        result = UPoly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, k: int) -> "UPoly":
        """Multiply by U^k."""
        return UPoly({e + k: c for e, c in self._terms.items()})

    def eval(self, at: Fraction | int) -> Fraction:
        at = Fraction(at)
        return sum((c * at**e for e, c in self._terms.items()), Fraction(0))

    def to_sympy(self, symbol: sp.Basic = U_SYMBOL) -> sp.Expr:
        return sp.Add(*(sp.Integer(c) * symbol**e for e, c in self._terms.items()))

    def divide_exact(self, divisor: "UPoly") -> "UPoly":
        if divisor.is_zero():
            raise DivisibilityError("Division by the zero polynomial")
        if self.is_zero():
            return UPoly()
        shift = self.min_exponent - divisor.min_exponent
        rem = self.shift(-self.min_exponent)
        div = divisor.shift(-divisor.min_exponent)
        top, lead = div.max_exponent, div._terms[div.max_exponent]
        quotient: dict[int, int] = {}
        while rem and rem.max_exponent >= top:
            e, c = rem.max_exponent, rem._terms[rem.max_exponent]
            if c % lead:
                raise DivisibilityError(f"{self} is not divisible by {divisor} over the integers")
            quotient[e - top] = c // lead
            rem = rem - div.shift(e - top) * (c // lead)
        if rem:
            raise DivisibilityError(f"{self} is not divisible by {divisor}: remainder {rem}")
        return UPoly(quotient).shift(shift)

    def __repr__(self) -> str:
        return f"UPoly({self._terms})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mono = "" if e == 0 else ("U" if e == 1 else f"U^{e}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c} {mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _upoly(value: "UPoly | int") -> UPoly:
    if isinstance(value, UPoly):
        return value
    return UPoly.constant(value)


U = UPoly.monomial(1)
U_INV = UPoly.monomial(-1)
ONE = UPoly.constant(1)


class TPoly:
    """Sparse polynomial in T1..Td over UPoly."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, "UPoly | int"] | None = None) -> None:
        self.nvars = nvars
        self._terms: dict[MultiIndex, UPoly] = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != nvars or any(x < 0 for x in exp):
                raise ValueError(f"Invalid exponent {exp} for {nvars} variables")
            coeff = _upoly(coeff)
            if coeff:
                self._terms[tuple(exp)] = coeff

    @classmethod
    def monomial(cls, nvars: int, exponent: Sequence[int], coeff: "UPoly | int" = 1) -> "TPoly":
        return cls(nvars, {tuple(exponent): coeff})

    @classmethod
    def one(cls, nvars: int) -> "TPoly":
        return cls.monomial(nvars, (0,) * nvars)

    @classmethod
    def factor(cls, nvars: int, i: int) -> "TPoly":
        """1 - U^-1 T_i"""
        return cls(nvars, {(0,) * nvars: 1, tuple(1 if j == i else 0 for j in range(nvars)): -U_INV})

    @property
    def terms(self) -> dict[MultiIndex, UPoly]:
        return dict(self._terms)

    def items(self) -> list[tuple[MultiIndex, UPoly]]:
        return sorted(self._terms.items())

    def coefficient(self, exponent: Sequence[int]) -> UPoly:
        return self._terms.get(tuple(exponent), UPoly())

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Largest total degree; -1 for the zero polynomial."""
        return max((norm(e) for e in self._terms), default=-1)

    def _check(self, other: "TPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"Variable count mismatch: {self.nvars} != {other.nvars}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def __add__(self, other: "TPoly") -> "TPoly":
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, UPoly()) + c
        return TPoly(self.nvars, out)

    def __neg__(self) -> "TPoly":
        return TPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other: "TPoly") -> "TPoly":
        self._check(other)
        out: dict[MultiIndex, UPoly] = {}
        for (ea, ca), (eb, cb) in itertools.product(self._terms.items(), other._terms.items()):
            e = add(ea, eb)
            out[e] = out.get(e, UPoly()) + ca * cb
        return TPoly(self.nvars, out)

    def scale(self, coeff: "UPoly | int", exponent: Sequence[int] | None = None) -> "TPoly":
        """Multiply by coeff * T^exponent."""
        coeff = _upoly(coeff)
        exponent = tuple(exponent) if exponent is not None else (0,) * self.nvars
        return TPoly(self.nvars, {add(e, exponent): c * coeff for e, c in self._terms.items()})

    def truncate(self, degree: int) -> "TPoly":
        return TPoly(self.nvars, {e: c for e, c in self._terms.items() if norm(e) <= degree})

    def substitute_diagonal(self) -> "TPoly":
        """T_i -> T for every i."""
        out: dict[MultiIndex, UPoly] = {}
        for e, c in self._terms.items():
            key = (norm(e),)
            out[key] = out.get(key, UPoly()) + c
        return TPoly(1, out)

    def evaluate_diagonal(self) -> UPoly:
        """Value at T1 = ... = Td = U."""
        return sum((c.shift(norm(e)) for e, c in self._terms.items()), UPoly())

    def divide_by_factor(self, i: int) -> "TPoly | None":
        """Exact quotient by (1 - U^-1 T_i), or None when it does not divide."""
        groups: dict[MultiIndex, dict[int, UPoly]] = {}
        for e, c in self._terms.items():
            rest = e[:i] + (0,) + e[i + 1 :]
            groups.setdefault(rest, {})[e[i]] = c
        out: dict[MultiIndex, UPoly] = {}
        for rest, column in groups.items():
            top = max(column)
            carry = UPoly()
            for k in range(top + 1):
                carry = column.get(k, UPoly()) + carry * U_INV
                if k == top:
                    if carry:
                        return None
                elif carry:
                    out[rest[:i] + (k,) + rest[i + 1 :]] = carry
        return TPoly(self.nvars, out)

    def to_sympy(self, u: sp.Basic = U_SYMBOL, ts: Sequence[sp.Basic] | None = None) -> sp.Expr:
        ts = ts if ts is not None else t_symbols(self.nvars)
        return sp.Add(*(c.to_sympy(u) * sp.Mul(*(t**k for t, k in zip(ts, e))) for e, c in self._terms.items()))

    def __repr__(self) -> str:
        return f"TPoly({self.nvars}, {self.items()})"


class ZetaForm:
    """numerator / prod_i (1 - U^-1 T_i)^denominator[i]"""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: TPoly, denominator: Sequence[int]) -> None:
        if len(denominator) != numerator.nvars or any(m < 0 for m in denominator):
            raise ValueError(f"Invalid denominator multiplicities {denominator}")
        self.numerator = numerator
        self.denominator: MultiIndex = tuple(denominator)

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    @classmethod
    def polynomial(cls, numerator: TPoly) -> "ZetaForm":
        return cls(numerator, (0,) * numerator.nvars)

    def denominator_poly(self) -> TPoly:
        out = TPoly.one(self.nvars)
        for i, m in enumerate(self.denominator):
            for _ in range(m):
                out = out * TPoly.factor(self.nvars, i)
        return out

    def with_denominator(self, target: Sequence[int]) -> "ZetaForm":
        """Same value over prod (1 - U^-1 T_i)^target[i]; target must dominate the current denominator."""
        numerator = self.numerator
        for i, (have, want) in enumerate(zip(self.denominator, target, strict=True)):
            if want < have:
                raise ValueError(f"Cannot lower the multiplicity of factor {i + 1} from {have} to {want}")
            for _ in range(want - have):
                numerator = numerator * TPoly.factor(self.nvars, i)
        return ZetaForm(numerator, target)

    def __add__(self, other: "ZetaForm") -> "ZetaForm":
        common = tuple(max(a, b) for a, b in zip(self.denominator, other.denominator, strict=True))
        return ZetaForm(self.with_denominator(common).numerator + other.with_denominator(common).numerator, common)

    def scale_by(self, coeff: "UPoly | int", exponent: Sequence[int] | None = None) -> "ZetaForm":
        return ZetaForm(self.numerator.scale(coeff, exponent), self.denominator)

    def normalize(self) -> "ZetaForm":
        numerator = self.numerator
        denominator = list(self.denominator)
        for i in range(self.nvars):
            while denominator[i] > 0 and not numerator.is_zero():
                quotient = numerator.divide_by_factor(i)
                if quotient is None:
                    break
                numerator = quotient
                denominator[i] -= 1
            if numerator.is_zero():
                denominator = [0] * self.nvars
        return ZetaForm(numerator, denominator)

    def equals(self, other: "ZetaForm") -> bool:
        if self.nvars != other.nvars:
            return False
        return self.numerator * other.denominator_poly() == other.numerator * self.denominator_poly()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZetaForm):
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def diagonal(self) -> "ZetaForm":
        return ZetaForm(self.numerator.substitute_diagonal(), (sum(self.denominator),)).normalize()

    def to_sympy(self, u: sp.Basic = U_SYMBOL, ts: Sequence[sp.Basic] | None = None) -> tuple[sp.Expr, sp.Expr]:
        ts = ts if ts is not None else t_symbols(self.nvars)
        den = sp.Mul(*((1 - ts[i] / u) ** m for i, m in enumerate(self.denominator)))
        return self.numerator.to_sympy(u, ts), den

    def __repr__(self) -> str:
        return f"ZetaForm({self.numerator!r}, {self.denominator})"


Specialization: TypeAlias = Union[Fraction, int, sp.Symbol]


class RationalFunction:
    """
    Cancelled quotient of sympy polynomials in `variables`; coefficients may involve
    further symbols (the symbolic q). The denominator is scaled so its constant term is 1
    when that term is a number.
    """

    __slots__ = ("numerator", "denominator", "variables")

    def __init__(self, numerator: sp.Expr, denominator: sp.Expr, variables: Sequence[sp.Symbol]) -> None:
        if sp.expand(denominator) == 0:
            raise ZeroDivisionError("Zero denominator")
        num, den = sp.fraction(sp.cancel(sp.together(numerator / denominator)))
        constant = sp.expand(den.subs({v: 0 for v in variables}))
        if constant.is_number and constant != 0:
            num, den = num / constant, den / constant
        elif constant.could_extract_minus_sign():
            num, den = -num, -den
        self.numerator: sp.Expr = sp.expand(num)
        self.denominator: sp.Expr = sp.expand(den)
        self.variables: tuple[sp.Symbol, ...] = tuple(variables)

    def equals(self, other: "RationalFunction") -> bool:
        return sp.expand(self.numerator * other.denominator - other.numerator * self.denominator) == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def subs(self, mapping: Mapping[sp.Basic, sp.Basic]) -> "RationalFunction":
        return RationalFunction(self.numerator.subs(mapping), self.denominator.subs(mapping), self.variables)

    def as_expr(self) -> sp.Expr:
        return self.numerator / self.denominator

    def numerator_terms(self) -> list[tuple[MultiIndex, sp.Expr]]:
        return _poly_terms(self.numerator, self.variables)

    def denominator_terms(self) -> list[tuple[MultiIndex, sp.Expr]]:
        return _poly_terms(self.denominator, self.variables)

    def __repr__(self) -> str:
        return f"RationalFunction(({self.numerator})/({self.denominator}))"


def _poly_terms(expr: sp.Expr, variables: Sequence[sp.Symbol]) -> list[tuple[MultiIndex, sp.Expr]]:
    if expr == 0:
        return []
    poly = sp.Poly(expr, *variables)
    return sorted((tuple(int(k) for k in m), sp.sympify(c)) for m, c in poly.terms())


def lookup(l: Mapping[MultiIndex, int] | Callable[[MultiIndex], int]) -> Callable[[MultiIndex], int]:
    if isinstance(l, Mapping):
        return l.__getitem__
    return l


def class_In(l: Mapping[MultiIndex, int] | Callable[[MultiIndex], int], n: Sequence[int], d: int) -> UPoly:
    """(U-1)^-1 U^(|n|+1) sum_{I} (-1)^#I U^-l(n+1_I)"""
    value = lookup(l)
    n = tuple(n)
    total = UPoly()
    for mask in range(2**d):
        shifted = tuple(x + (mask >> j & 1) for j, x in enumerate(n))
        sign = -1 if bin(mask).count("1") % 2 else 1
        total = total + UPoly.monomial(-value(shifted), sign)
    try:
        return total.shift(norm(n) + 1).divide_exact(U - 1)
    except DivisibilityError as e:
        raise DivisibilityError(f"class of I_{n}: invalid l-table or {n} not in S ({e})") from e


def class_J(delta: int, d: int) -> UPoly:
    """(U-1)^(d-1) U^(delta-d+1)"""
    if delta < d - 1:
        raise ValueError(f"delta {delta} < d - 1 = {d - 1}")
    return ((U - 1) ** (d - 1)).shift(delta - d + 1)


def class_units_jet(delta: int, c: Sequence[int]) -> UPoly:
    """Class of the (c-1)-jets of units of O: (U-1) U^(|c|-delta-1), and U-1 at a regular point."""
    if norm(c) == 0:
        return U - 1
    return (U - 1).shift(norm(c) - delta - 1)


def chi_ring(delta: int) -> UPoly:
    return UPoly.monomial(-delta)


def chi_units(delta: int) -> UPoly:
    return (U - 1).shift(-delta - 1)
