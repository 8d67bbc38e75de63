"""
Value semigroups S in N^d described by their conductor c and the finite box S ∩ [0, c+1].

Membership outside the box reduces to the box: a coordinate n_j >= c_j can be moved
anywhere in [c_j, oo) without changing membership.
"""

import logging
import math
from collections.abc import Sequence
from functools import reduce

from pydantic import BaseModel, ConfigDict, Field

from curvezeta.exceptions import SemigroupError
from curvezeta.series import MultiIndex, add, box, norm, sub, unit

logger = logging.getLogger(__name__)


class SemigroupData(BaseModel):
    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=1)
    conductor: MultiIndex
    delta: int = Field(ge=0)
    box: frozenset[MultiIndex]
    l_table: dict[MultiIndex, int] = Field(default_factory=dict, description="l(n) on [0, c+2]")

    @property
    def is_gorenstein(self) -> bool:
        return is_gorenstein(self)

    def contains(self, n: Sequence[int]) -> bool:
        if any(x < 0 for x in n):
            return False
        return tuple(min(x, c) for x, c in zip(n, self.conductor)) in self.box

    def elements(self) -> list[MultiIndex]:
        return sorted(self.box)


class BSet(BaseModel):
    """Residual indices m (off J, m_j < c_j) whose upper box H_{J,m} is nonempty."""

    model_config = ConfigDict(frozen=True)

    J: tuple[int, ...]
    members: tuple[MultiIndex, ...]
    f_values: dict[MultiIndex, MultiIndex] = Field(default_factory=dict)

    def f(self, m: MultiIndex) -> MultiIndex:
        return self.f_values[m]


class HStratum(BaseModel):
    model_config = ConfigDict(frozen=True)

    J: tuple[int, ...]
    m: MultiIndex | None = None

    def kind(self, d: int) -> str:
        if not self.J:
            return "empty"
        if len(self.J) == d:
            return "full"
        return "partial"


def is_gorenstein(S: SemigroupData) -> bool:
    return norm(S.conductor) == 2 * S.delta


def from_numerical_generators(gens: Sequence[int]) -> SemigroupData:
    """Numerical semigroup <g1,...,gk> (d = 1)."""
    gens = sorted(set(gens))
    if not gens or gens[0] <= 0:
        raise SemigroupError(f"Generators must be positive integers, got {gens}")
    if reduce(math.gcd, gens) != 1:
        raise SemigroupError(f"Generators {gens} have gcd > 1: infinitely many gaps")
    bound = gens[0] * gens[-1] + 1
    member = [False] * (bound + 1)
    member[0] = True
    for k in range(1, bound + 1):
        member[k] = any(k >= g and member[k - g] for g in gens)
    gaps = [k for k in range(bound + 1) if not member[k]]
    c = gaps[-1] + 1 if gaps else 0
    elements = [(k,) for k in range(c + 2) if member[k]]
    return from_box((c,), elements, delta=len(gaps))


def _validate(c: MultiIndex, members: frozenset[MultiIndex]) -> None:
    d = len(c)
    upper = add(c, (1,) * d)
    for n in members:
        if len(n) != d or any(x < 0 or x > u for x, u in zip(n, upper)):
            raise SemigroupError(f"Element {n} outside the box [0, {upper}]")
    if (0,) * d not in members:
        raise SemigroupError("0 not in S")
    missing = [n for n in box(upper, c) if n not in members]
    if missing:
        raise SemigroupError(f"conductor region: {missing[0]} >= c is missing")
    for n in box(upper):
        capped = tuple(min(x, y) for x, y in zip(n, c))
        if (n in members) != (capped in members):
            raise SemigroupError(f"conductor saturation: membership of {n} and {capped} differ")
    for a in members:
        for b in members:
            low = tuple(min(x, y) for x, y in zip(a, b))
            if low not in members:
                raise SemigroupError(f"min-closure: min({a}, {b}) = {low} not in S")
    for i in range(d):
        if c[i] == 0:
            continue
        lower = sub(c, unit(d, i))
        if all(n in members for n in box(upper, lower)):
            raise SemigroupError(f"conductor not minimal: {lower} already has the conductor property")


def from_box(c: Sequence[int], elements: Sequence[Sequence[int]], delta: int | None = None) -> SemigroupData:
    """
    Validate the box S ∩ [0, c+1] and fill the l-table on [0, c+2] by the chain formula.
    delta is derived as |c| - l(c); a given value must agree.
    """
    c = tuple(c)
    if not c or any(x < 0 for x in c):
        raise SemigroupError(f"Invalid conductor {c}")
    members = frozenset(tuple(n) for n in elements)
    _validate(c, members)
    d = len(c)
    S = SemigroupData(d=d, conductor=c, delta=0, box=members)
    table: dict[MultiIndex, int] = {}
    for n in box(add(c, (2,) * d)):
        k = next((j for j, x in enumerate(n) if x > 0), None)
        if k is None:
            table[n] = 0
            continue
        prev = sub(n, unit(d, k))
        table[n] = table[prev] + step_dim_combinatorial(S, prev, k)
    derived = norm(c) - table[c]
    if delta is not None and delta != derived:
        raise SemigroupError(f"delta {delta} disagrees with |c| - l(c) = {derived}")
    if derived < d - 1:
        raise SemigroupError(f"delta {derived} is below d - 1 = {d - 1}: not the semigroup of a local ring")
    logger.debug("semigroup c=%s delta=%d with %d box elements", c, derived, len(members))
    return S.model_copy(update={"delta": derived, "l_table": table})


def step_dim_combinatorial(S: SemigroupData, n: Sequence[int], i: int) -> int:
    """
    dim J_n / J_{n+e_i}: 1 iff some s in S has s_i = n_i and s_j >= n_j elsewhere.
    Negative coordinates are allowed (J_n only depends on max(n, 0)).
    """
    if n[i] < 0:
        return 0
    if n[i] >= S.conductor[i]:
        return 1
    capped = tuple(min(max(x, 0), c) for x, c in zip(n, S.conductor))
    for s in S.box:
        if s[i] == n[i] and all(s[j] >= capped[j] for j in range(S.d) if j != i):
            return 1
    return 0


def l_value_combinatorial(S: SemigroupData, n: Sequence[int]) -> int:
    n = tuple(max(x, 0) for x in n)
    if n in S.l_table:
        return S.l_table[n]
    top = add(S.conductor, (2,) * S.d)
    inside = tuple(min(x, t) for x, t in zip(n, top))
    return S.l_table[inside] + sum(x - t for x, t in zip(n, top) if x > t)


def under_conductor_elements(S: SemigroupData) -> list[MultiIndex]:
    return sorted(n for n in S.box if all(x < c for x, c in zip(n, S.conductor)))


def _proper_subsets(d: int) -> list[tuple[int, ...]]:
    return [tuple(j for j in range(d) if mask >> j & 1) for mask in range(1, 2**d - 1)]


def b_sets(S: SemigroupData) -> dict[tuple[int, ...], BSet]:
    """B_J for every proper nonempty J (0-based branch indices)."""
    result = {}
    for J in _proper_subsets(S.d):
        rest = tuple(j for j in range(S.d) if j not in J)
        # work in the frame where J comes first, then map back
        perm = J + rest
        c_perm = tuple(S.conductor[j] for j in perm)
        members = []
        f_values = {}
        for m in box(tuple(S.conductor[j] - 1 for j in rest)):
            f_perm = c_perm[: len(J)] + m
            f = [0] * S.d
            for k, j in enumerate(perm):
                f[j] = f_perm[k]
            if S.contains(f):
                members.append(m)
                f_values[m] = tuple(f)
        result[J] = BSet(J=J, members=tuple(members), f_values=f_values)
    return result


def h_decomposition(S: SemigroupData, bound: Sequence[int]) -> dict[MultiIndex, HStratum]:
    """Label every n in S ∩ [0, bound] by J = {j : n_j >= c_j} and, for proper J, the residue m."""
    bound = tuple(bound)
    if any(b < c for b, c in zip(bound, S.conductor)):
        raise ValueError(f"bound {bound} must be >= the conductor {S.conductor}")
    bsets = b_sets(S)
    labels = {}
    for n in box(bound):
        if not S.contains(n):
            continue
        J = tuple(j for j in range(S.d) if n[j] >= S.conductor[j])
        if not J or len(J) == S.d:
            labels[n] = HStratum(J=J)
            continue
        m = tuple(n[j] for j in range(S.d) if j not in J)
        if m not in bsets[J].members:
            raise SemigroupError(f"{n} lies in H_{J} but {m} is not in B_{J}")
        labels[n] = HStratum(J=J, m=m)
    return labels
