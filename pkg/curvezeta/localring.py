"""
The local ring O as a subspace of truncated jets of its normalization.

A model is built either from generators (the closure of their monomials) or from
homogeneous linear conditions on the coefficients a_{i,e}. All dimension queries
(l(n), step dimensions, delta, conductor, semigroup membership) are exact rank
computations on the reduced echelon basis.
"""

import functools
import logging
import threading
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import TypeAlias

from pydantic import BaseModel, ConfigDict, Field

from curvezeta import linalg
from curvezeta.exceptions import PrecisionError, RingError, SemigroupError
from curvezeta.series import MultiIndex, SeriesElement, add, box, norm, unit, valuation
from curvezeta.valuesemigroup import SemigroupData, from_box

logger = logging.getLogger(__name__)

# (branch, exponent, coefficient), branch counted from 1
ConditionTerm: TypeAlias = tuple[int, int, Fraction]
ConditionRow: TypeAlias = Sequence[ConditionTerm]
GeneratorFactory: TypeAlias = Callable[[MultiIndex], Sequence[SeriesElement]]

DEFAULT_START_TRUNCATION = 8
DEFAULT_MAX_TRUNCATION_NORM = 512
# coefficients above the highest exponent l_value reads
MARGIN = 1


class JetCoordinates(BaseModel):
    """Coordinates (exponent e, branch i) with e <= N_i, graded: exponent first, then branch."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=1)
    truncation: MultiIndex

    @functools.cached_property
    def coords(self) -> tuple[tuple[int, int], ...]:
        top = max(self.truncation)
        return tuple((e, i) for e in range(top + 1) for i in range(self.d) if e <= self.truncation[i])

    @functools.cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {c: k for k, c in enumerate(self.coords)}

    def __len__(self) -> int:
        return len(self.coords)

    def to_vector(self, s: SeriesElement) -> list[Fraction]:
        if s.d != self.d:
            raise RingError(f"Series with {s.d} branches in a {self.d}-branch jet space")
        s = s.retruncate(self.truncation)
        vec = [Fraction(0)] * len(self)
        for i, branch in enumerate(s.branches):
            for e, c in branch.items():
                vec[self.index[(e, i)]] = c
        return vec

    def to_series(self, vec: Sequence[Fraction]) -> SeriesElement:
        branches: list[dict[int, Fraction]] = [{} for _ in range(self.d)]
        for (e, i), c in zip(self.coords, vec):
            if c:
                branches[i][e] = c
        return SeriesElement.from_terms(branches, self.truncation)

    def columns_below(self, n: Sequence[int]) -> list[int]:
        return [k for k, (e, i) in enumerate(self.coords) if e < n[i]]

    def monomial(self, i: int, e: int) -> list[Fraction]:
        vec = [Fraction(0)] * len(self)
        vec[self.index[(e, i)]] = Fraction(1)
        return vec


class JetSpace(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coords: JetCoordinates
    basis: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_echelon(cls, coords: JetCoordinates, echelon: linalg.Echelon) -> "JetSpace":
        return cls(coords=coords, basis=tuple(tuple(r) for r in echelon.rows), pivots=tuple(echelon.pivots))

    @classmethod
    def from_rows(cls, coords: JetCoordinates, rows: Sequence[Sequence[Fraction]]) -> "JetSpace":
        echelon, pivots = linalg.rref(rows, len(coords))
        return cls(coords=coords, basis=tuple(tuple(r) for r in echelon), pivots=tuple(pivots))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return linalg.in_span(vec, self.basis, self.pivots)


class LocalRingModel:
    """
    Jet model of O at a fixed truncation. Immutable apart from the l-value and
    conductor caches, which are filled under a lock.
    """

    def __init__(
        self,
        jets: JetSpace,
        rebuild: Callable[[MultiIndex], "LocalRingModel"],
        generators: Sequence[SeriesElement] | None = None,
        conditions: Sequence[ConditionRow] | None = None,
    ) -> None:
        self.jets = jets
        self.generators = list(generators) if generators is not None else None
        self.conditions = list(conditions) if conditions is not None else None
        self._rebuild = rebuild
        self._lock = threading.Lock()
        self._l_cache: dict[MultiIndex, int] = {}
        self._conductor: MultiIndex | None = None

    @property
    def d(self) -> int:
        return self.jets.coords.d

    @property
    def truncation(self) -> MultiIndex:
        return self.jets.coords.truncation

    def rebuild(self, truncation: MultiIndex) -> "LocalRingModel":
        return self._rebuild(truncation)

    def l_value(self, n: MultiIndex) -> int:
        """
        dim O/J_n: the rank of the basis restricted to coordinates of exponent < n_i.
        Exponents 0..N_i are stored, so n_i may go up to N_i + 1 - MARGIN.
        """
        n = tuple(n)
        if len(n) != self.d or any(x < 0 for x in n):
            raise ValueError(f"Invalid multi-index {n} for {self.d} branches")
        if any(x > limit + 1 - MARGIN for x, limit in zip(n, self.truncation)):
            raise PrecisionError(f"l{n} needs a truncation above {self.truncation}")
        with self._lock:
            if n in self._l_cache:
                return self._l_cache[n]
        cols = self.jets.coords.columns_below(n)
        value = linalg.rank([[row[k] for k in cols] for row in self.jets.basis], len(cols))
        with self._lock:
            self._l_cache.setdefault(n, value)
        return value

    def step_dim(self, n: MultiIndex, i: int) -> int:
        """dim J_n / J_{n+e_i}, always 0 or 1."""
        step = self.l_value(add(n, unit(self.d, i))) - self.l_value(n)
        if step not in (0, 1):
            raise RingError(f"Step dimension {step} at {n} in direction {i + 1}: not a ring of a curve")
        return step

    def contains_valuation(self, n: MultiIndex) -> bool:
        return all(self.step_dim(n, i) == 1 for i in range(self.d))

    def delta(self) -> int:
        return len(self.jets.coords) - self.jets.dim

    def conductor(self) -> MultiIndex:
        """Per branch, the least c_i with every t_i^e (c_i <= e <= N_i) in the jet space."""
        with self._lock:
            if self._conductor is not None:
                return self._conductor
        result = []
        for i, limit in enumerate(self.truncation):
            c_i = limit + 1
            for e in range(limit, -1, -1):
                if not self.jets.contains(self.jets.coords.monomial(i, e)):
                    break
                c_i = e
            if c_i > limit:
                raise PrecisionError(f"No conductor visible on branch {i + 1} at truncation {self.truncation}")
            result.append(c_i)
        with self._lock:
            if self._conductor is None:
                self._conductor = tuple(result)
            return self._conductor


def _check_local(jets: JetSpace) -> None:
    coords = jets.coords
    if not jets.contains([Fraction(1) if e == 0 else Fraction(0) for e, _ in coords.coords]):
        raise RingError("The subspace does not contain 1")
    constants = [k for k, (e, _) in enumerate(coords.coords) if e == 0]
    if linalg.rank([[row[k] for k in constants] for row in jets.basis], len(constants)) != 1:
        raise RingError("Constant terms differ between branches: the ring is not local")


def _fixed_generators(gens: Sequence[SeriesElement]) -> GeneratorFactory:
    def factory(truncation: MultiIndex) -> list[SeriesElement]:
        return [g.retruncate(truncation) for g in gens]

    return factory


def build_from_generators(gens: Sequence[SeriesElement] | GeneratorFactory, truncation: MultiIndex) -> LocalRingModel:
    """
    Row space of all monomials in the generators, closed breadth-first: each round multiplies
    the vectors added in the previous round by every generator and stops when nothing new appears.
    """
    factory = gens if callable(gens) else _fixed_generators(gens)
    truncation = tuple(truncation)
    series = list(factory(truncation))
    if not series:
        raise RingError("At least one generator is required")
    for g in series:
        if any(v is None for v in valuation(g)):
            raise PrecisionError(f"Zero-divisor generator or precision too low: valuation {valuation(g)}")
    coords = JetCoordinates(d=len(truncation), truncation=truncation)
    echelon = linalg.Echelon(len(coords))
    frontier = [SeriesElement.one(truncation)]
    echelon.add(coords.to_vector(frontier[0]))
    rounds = 0
    while frontier:
        rounds += 1
        added = []
        for v in frontier:
            for g in series:
                product = v * g
                if echelon.add(coords.to_vector(product)):
                    added.append(product)
        frontier = added
    logger.debug("monomial closure: %d rounds, dimension %d at truncation %s", rounds, len(echelon), truncation)
    jets = JetSpace.from_echelon(coords, echelon)
    _check_local(jets)
    return LocalRingModel(jets, functools.partial(build_from_generators, factory), generators=series)


def build_from_conditions(conditions: Sequence[ConditionRow], d: int, truncation: MultiIndex) -> LocalRingModel:
    """Kernel of the conditions inside the jet space, validated to be a local ring."""
    truncation = tuple(truncation)
    if len(truncation) != d:
        raise RingError(f"Truncation {truncation} does not have {d} entries")
    coords = JetCoordinates(d=d, truncation=truncation)
    matrix = []
    for row in conditions:
        vec = [Fraction(0)] * len(coords)
        for branch, exponent, coeff in row:
            if not 1 <= branch <= d or exponent < 0:
                raise RingError(f"Invalid condition term ({branch}, {exponent}) for {d} branches")
            if exponent > truncation[branch - 1]:
                raise PrecisionError(f"Condition on a_({branch},{exponent}) is beyond truncation {truncation}")
            vec[coords.index[(exponent, branch - 1)]] += Fraction(coeff)
        matrix.append(vec)
    jets = JetSpace.from_rows(coords, linalg.nullspace(matrix, len(coords)))
    _check_local(jets)
    vectors = [coords.to_series(row) for row in jets.basis]
    for a, first in enumerate(vectors):
        for second in vectors[a:]:
            if not jets.contains(coords.to_vector(first * second)):
                raise RingError("The conditions are not closed under multiplication")
    return LocalRingModel(
        jets,
        functools.partial(build_from_conditions, list(conditions), d),
        conditions=conditions,
    )


def semigroup_box(model: LocalRingModel) -> SemigroupData:
    """
    Membership is read off the ring on [0, c] only, which needs l up to c+1.
    Coordinates at c+1 follow from the conductor: n is in S iff min(n, c) is.
    """
    c = model.conductor()
    below = {n for n in box(c) if model.contains_valuation(n)}
    elements = [n for n in box(add(c, (1,) * model.d)) if tuple(min(x, y) for x, y in zip(n, c)) in below]
    try:
        return from_box(c, elements, delta=model.delta())
    except SemigroupError as e:
        raise PrecisionError(f"Inconsistent semigroup at truncation {model.truncation}: {e}") from e


class StabilityReport(BaseModel):
    truncation: MultiIndex
    rebuilt_truncation: MultiIndex
    stable: bool
    drift: list[str] = Field(default_factory=list)


def _snapshot(model: LocalRingModel) -> dict:
    semigroup = semigroup_box(model)
    c = semigroup.conductor
    return {
        "delta": model.delta(),
        "conductor": c,
        "semigroup": sorted(semigroup.box),
        "l-table": {n: model.l_value(n) for n in box(add(c, (1,) * model.d))},
    }


def stability_check(model: LocalRingModel) -> StabilityReport:
    """Rebuild at 2N+2 and compare delta, conductor, semigroup box and l-table."""
    rebuilt = tuple(2 * x + 2 for x in model.truncation)
    drift = []
    snapshots = []
    for label, build in (("working", lambda: model), ("rebuilt", lambda: model.rebuild(rebuilt))):
        try:
            snapshots.append(_snapshot(build()))
        except PrecisionError as e:
            drift.append(f"{label} truncation: {e}")
    if len(snapshots) == 2:
        drift.extend(
            f"{key} changed: {snapshots[0][key]} -> {snapshots[1][key]}"
            for key in snapshots[0]
            if snapshots[0][key] != snapshots[1][key]
        )
    report = StabilityReport(truncation=model.truncation, rebuilt_truncation=rebuilt, stable=not drift, drift=drift)
    if not report.stable:
        logger.warning("truncation %s is not stable: %s", model.truncation, "; ".join(drift))
    return report


def resolve_model(
    build: Callable[[MultiIndex], LocalRingModel],
    d: int,
    truncation: MultiIndex | None = None,
    start: int = DEFAULT_START_TRUNCATION,
    max_norm: int = DEFAULT_MAX_TRUNCATION_NORM,
) -> LocalRingModel:
    """
    With an explicit truncation the model must pass the stability check as is.
    Otherwise start at (start,...,start) and move to 2N+2 until it does.
    """
    if truncation is not None:
        model = build(tuple(truncation))
        report = stability_check(model)
        if not report.stable:
            raise PrecisionError(f"Truncation {model.truncation} is too low: {'; '.join(report.drift)}")
        return model
    current: MultiIndex = (start,) * d
    while norm(current) <= max_norm:
        try:
            model = build(current)
            if stability_check(model).stable:
                logger.info("resolved truncation %s", current)
                return model
        except PrecisionError as e:
            logger.debug("truncation %s rejected: %s", current, e)
        current = tuple(2 * x + 2 for x in current)
    raise PrecisionError(f"No stable truncation with norm <= {max_norm}")
