"""
Truncated power series on d branches: the normalization k[[t1]] x ... x k[[td]] with exact
rational coefficients.

Every value records its truncation N: coefficients of exponent <= N_i on branch i are known,
everything above is unknown. Mixing truncations keeps the componentwise minimum.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from typing import TypeAlias

import sympy as sp
from pydantic import BaseModel, ConfigDict, model_validator

from curvezeta.exceptions import InputError, PrecisionError

logger = logging.getLogger(__name__)

MultiIndex: TypeAlias = tuple[int, ...]
Branch: TypeAlias = dict[int, Fraction]


def norm(n: Sequence[int]) -> int:
    return sum(n)


def leq(n: Sequence[int], m: Sequence[int]) -> bool:
    """Product order n <= m."""
    return all(a <= b for a, b in zip(n, m, strict=True))


def unit(d: int, i: int) -> MultiIndex:
    return tuple(1 if j == i else 0 for j in range(d))


def ones(d: int) -> MultiIndex:
    return (1,) * d


def add(n: Sequence[int], m: Sequence[int]) -> MultiIndex:
    return tuple(a + b for a, b in zip(n, m, strict=True))


def sub(n: Sequence[int], m: Sequence[int]) -> MultiIndex:
    return tuple(a - b for a, b in zip(n, m, strict=True))


def box(upper: Sequence[int], lower: Sequence[int] | None = None) -> Iterable[MultiIndex]:
    """All n with lower <= n <= upper, in lexicographic order."""
    if lower is None:
        lower = (0,) * len(upper)
    if not upper:
        yield ()
        return
    for head in range(lower[0], upper[0] + 1):
        for tail in box(upper[1:], lower[1:]):
            yield (head,) + tail


def _clean(branch: Mapping[int, Fraction | int], limit: int) -> Branch:
    return {e: Fraction(c) for e, c in branch.items() if c != 0 and 0 <= e <= limit}


def _branch_mul(a: Branch, b: Branch, limit: int) -> Branch:
    out: dict[int, Fraction] = {}
    for ea, ca in a.items():
        if ea > limit:
            continue
        for eb, cb in b.items():
            e = ea + eb
            if e <= limit:
                out[e] = out.get(e, Fraction(0)) + ca * cb
    return _clean(out, limit)


def _branch_inverse(a: Branch, limit: int) -> Branch:
    a0 = a.get(0)
    if a0 is None:
        raise InputError("Cannot invert a series with vanishing constant term")
    inv0 = 1 / a0
    out = {0: inv0}
    for k in range(1, limit + 1):
        acc = sum((a.get(j, Fraction(0)) * out.get(k - j, Fraction(0)) for j in range(1, k + 1)), Fraction(0))
        if acc:
            out[k] = -inv0 * acc
    return _clean(out, limit)


def _branch_pow(a: Branch, k: int, limit: int) -> Branch:
    result: Branch = {0: Fraction(1)}
    base = a
    while k:
        if k & 1:
            result = _branch_mul(result, base, limit)
        k >>= 1
        if k:
            base = _branch_mul(base, base, limit)
    return result


def _rational_root(value: Fraction, n: int) -> Fraction:
    if value < 0 and n % 2 == 0:
        raise InputError(f"Constant term {value} has no rational root of even order {n}")
    sign = -1 if value < 0 else 1
    num, num_exact = sp.integer_nthroot(abs(value.numerator), n)
    den, den_exact = sp.integer_nthroot(value.denominator, n)
    if not (num_exact and den_exact):
        raise InputError(f"Constant term {value} is not an exact {n}-th power in Q")
    return sign * Fraction(int(num), int(den))


class SeriesElement(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    branches: tuple[dict[int, Fraction], ...]
    truncation: MultiIndex

    @model_validator(mode="after")
    def check_truncation(self) -> "SeriesElement":
        if not self.branches or len(self.branches) != len(self.truncation):
            raise ValueError("branches and truncation must have the same positive length")
        for branch, limit in zip(self.branches, self.truncation):
            if limit < 0:
                raise ValueError(f"Negative truncation {limit}")
            for e, c in branch.items():
                if c == 0 or not 0 <= e <= limit:
                    raise ValueError(f"Invalid stored term {c} t^{e} with truncation {limit}")
        return self

    @classmethod
    def from_terms(cls, branches: Sequence[Mapping[int, Fraction | int]], truncation: Sequence[int]) -> "SeriesElement":
        truncation = tuple(truncation)
        if len(branches) != len(truncation):
            raise InputError(f"{len(branches)} branches given for a truncation of length {len(truncation)}")
        return cls(
            branches=tuple(_clean(b, limit) for b, limit in zip(branches, truncation)),
            truncation=truncation,
        )

    @classmethod
    def constant(cls, value: Fraction | int, truncation: Sequence[int]) -> "SeriesElement":
        return cls.from_terms([{0: value} for _ in truncation], truncation)

    @classmethod
    def one(cls, truncation: Sequence[int]) -> "SeriesElement":
        return cls.constant(1, truncation)

    @classmethod
    def monomial(cls, exponents: Sequence[int], truncation: Sequence[int]) -> "SeriesElement":
        """(t1^e1, ..., td^ed)"""
        return cls.from_terms([{e: 1} for e in exponents], truncation)

    @property
    def d(self) -> int:
        return len(self.truncation)

    def coefficient(self, branch: int, exponent: int) -> Fraction:
        return self.branches[branch].get(exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.branches)

    def retruncate(self, truncation: Sequence[int]) -> "SeriesElement":
        truncation = tuple(truncation)
        if not leq(truncation, self.truncation):
            raise PrecisionError(f"Series known up to {self.truncation}, requested {truncation}")
        return SeriesElement.from_terms(self.branches, truncation)

    def __add__(self, other: "SeriesElement") -> "SeriesElement":
        return series_add(self, other)

    def __neg__(self) -> "SeriesElement":
        return SeriesElement(
            branches=tuple({e: -c for e, c in b.items()} for b in self.branches), truncation=self.truncation
        )

    def __sub__(self, other: "SeriesElement") -> "SeriesElement":
        return series_add(self, -other)

    def __mul__(self, other: "SeriesElement") -> "SeriesElement":
        return series_mul(self, other)

    def __pow__(self, k: int) -> "SeriesElement":
        if k < 0:
            return invert_unit(self) ** (-k)
        return SeriesElement.from_terms(
            [_branch_pow(b, k, limit) for b, limit in zip(self.branches, self.truncation)], self.truncation
        )


def _common_truncation(a: SeriesElement, b: SeriesElement) -> MultiIndex:
    if a.d != b.d:
        raise InputError(f"Branch count mismatch: {a.d} != {b.d}")
    return tuple(min(x, y) for x, y in zip(a.truncation, b.truncation))


def series_add(a: SeriesElement, b: SeriesElement) -> SeriesElement:
    truncation = _common_truncation(a, b)
    branches = []
    for ba, bb in zip(a.branches, b.branches):
        out = dict(ba)
        for e, c in bb.items():
            out[e] = out.get(e, Fraction(0)) + c
        branches.append(out)
    return SeriesElement.from_terms(branches, truncation)


def series_mul(a: SeriesElement, b: SeriesElement) -> SeriesElement:
    truncation = _common_truncation(a, b)
    return SeriesElement.from_terms(
        [_branch_mul(ba, bb, limit) for ba, bb, limit in zip(a.branches, b.branches, truncation)], truncation
    )


def valuation(a: SeriesElement) -> tuple[int | None, ...]:
    """Per-branch order; None stands for "zero up to the truncation"."""
    return tuple(min(b) if b else None for b in a.branches)


def invert_unit(a: SeriesElement) -> SeriesElement:
    if any(v != 0 for v in valuation(a)):
        raise InputError(f"Series with valuation {valuation(a)} is not a unit")
    return SeriesElement.from_terms(
        [_branch_inverse(b, limit) for b, limit in zip(a.branches, a.truncation)], a.truncation
    )


def nth_root(a: SeriesElement, n: int) -> SeriesElement:
    """
    The unit b with b^n = a and b(0) the principal rational root of a(0).
    Newton iteration b <- ((n-1) b + a / b^(n-1)) / n, exact on every step.
    """
    if n < 1:
        raise InputError(f"Root order must be positive, got {n}")
    if any(v != 0 for v in valuation(a)):
        raise InputError(f"Series with valuation {valuation(a)} is not a unit")
    branches = []
    for branch, limit in zip(a.branches, a.truncation):
        root: Branch = {0: _rational_root(branch[0], n)}
        precision = 1
        while precision <= limit:
            precision *= 2
            correction = _branch_mul(branch, _branch_inverse(_branch_pow(root, n - 1, limit), limit), limit)
            merged = {e: (n - 1) * root.get(e, Fraction(0)) + correction.get(e, Fraction(0)) for e in range(limit + 1)}
            root = _clean({e: c / n for e, c in merged.items()}, limit)
        if _branch_pow(root, n, limit) != _clean(branch, limit):
            raise ArithmeticError(f"Newton iteration for the {n}-th root did not converge")
        branches.append(root)
    logger.debug("nth_root order %d at truncation %s", n, a.truncation)
    return SeriesElement.from_terms(branches, a.truncation)
