"""
JSON input descriptions and the pipelines that turn them into a value semigroup
(and, for ring-given inputs, the local ring model behind it).
"""

import functools
import json
import logging
from fractions import Fraction
from typing import Annotated, Literal

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from curvezeta.exceptions import InputError
from curvezeta.localring import (
    DEFAULT_MAX_TRUNCATION_NORM,
    DEFAULT_START_TRUNCATION,
    ConditionTerm,
    LocalRingModel,
    build_from_conditions,
    build_from_generators,
    resolve_model,
    semigroup_box,
)
from curvezeta.parse_utils import parse_rational
from curvezeta.series import MultiIndex, SeriesElement, nth_root
from curvezeta.valuesemigroup import SemigroupData, from_box, from_numerical_generators

logger = logging.getLogger(__name__)

Rational = Annotated[Fraction, BeforeValidator(parse_rational)]
Term = tuple[int, Rational]

MODE_FIELDS: dict[str, set[str]] = {
    "parametrization": {"generators"},
    "linear_conditions": {"branches", "conditions"},
    "numerical_semigroup": {"semigroup_generators"},
    "semigroup_box": {"conductor", "elements"},
}
OPTIONAL_FIELDS: dict[str, set[str]] = {
    "parametrization": {"branches", "truncation"},
    "linear_conditions": {"truncation"},
    "numerical_semigroup": set(),
    "semigroup_box": {"branches"},
}
DATA_FIELDS = set().union(*MODE_FIELDS.values(), *OPTIONAL_FIELDS.values())


class Factor(BaseModel):
    """poly ** power, with power a rational a/b: the b-th root of a unit raised to a."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    poly: list[Term]
    power: Rational = Fraction(1)


Branch = list[Factor] | list[Term]


class InputDescription(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    mode: Literal["parametrization", "linear_conditions", "numerical_semigroup", "semigroup_box"]
    name: str | None = None
    branches: int | None = Field(default=None, ge=1)
    truncation: list[Annotated[int, Field(ge=1)]] | None = None
    generators: list[list[Branch]] | None = Field(default=None, description="generators[k][i]: branch i of generator k")
    conditions: list[list[tuple[int, int, Rational]]] | None = None
    semigroup_generators: list[Annotated[int, Field(ge=1)]] | None = None
    conductor: list[Annotated[int, Field(ge=0)]] | None = None
    elements: list[list[Annotated[int, Field(ge=0)]]] | None = None
    expect_gorenstein: bool | None = None
    plane_origin: bool | None = None

    @model_validator(mode="after")
    def check_mode_fields(self) -> "InputDescription":
        required = MODE_FIELDS[self.mode]
        allowed = required | OPTIONAL_FIELDS[self.mode]
        for field in sorted(required):
            if getattr(self, field) is None:
                raise ValueError(f"mode {self.mode} requires '{field}'")
        for field in sorted(DATA_FIELDS - allowed):
            if getattr(self, field) is not None:
                raise ValueError(f"'{field}' is not accepted in mode {self.mode}")
        d = self.d
        if self.truncation is not None and len(self.truncation) != d:
            raise ValueError(f"truncation has {len(self.truncation)} entries for {d} branches")
        if self.generators is not None:
            if not self.generators:
                raise ValueError("at least one generator is required")
            for k, gen in enumerate(self.generators):
                if len(gen) != d:
                    raise ValueError(f"generator {k + 1} has {len(gen)} branches, expected {d}")
        if self.elements is not None and any(len(n) != d for n in self.elements):
            raise ValueError(f"every element must have {d} entries")
        return self

    @property
    def d(self) -> int:
        if self.mode == "numerical_semigroup":
            return 1
        if self.mode == "semigroup_box" and self.conductor is not None:
            if self.branches is not None and self.branches != len(self.conductor):
                raise ValueError(f"branches={self.branches} but the conductor has {len(self.conductor)} entries")
            return len(self.conductor)
        if self.branches is not None:
            return self.branches
        if self.generators:
            return len(self.generators[0])
        return 1


def _format_error(e: ValidationError) -> str:
    return "; ".join(f"{'.'.join(str(x) for x in err['loc']) or 'input'}: {err['msg']}" for err in e.errors())


def parse_input(text: str) -> InputDescription:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"Invalid JSON: {e}") from e
    try:
        return InputDescription.model_validate(data)
    except ValidationError as e:
        raise InputError(_format_error(e)) from e


def _branch_series(branch: Branch, limit: int) -> dict[int, Fraction]:
    """Evaluate one branch of a generator as a single-branch series up to t^limit."""
    truncation = (limit,)
    if not branch:
        return {}
    if not isinstance(branch[0], Factor):
        return dict(SeriesElement.from_terms([_terms(branch)], truncation).branches[0])
    value = SeriesElement.one(truncation)
    for factor in branch:
        base = SeriesElement.from_terms([_terms(factor.poly)], truncation)
        power = factor.power
        if power.denominator != 1:
            base = nth_root(base, power.denominator)
        value = value * base ** power.numerator
    return dict(value.branches[0])


def _terms(terms: list[Term]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for e, c in terms:
        if e < 0:
            raise InputError(f"Negative exponent {e}")
        out[e] = out.get(e, Fraction(0)) + c
    return out


def generator_factory(description: InputDescription):
    def factory(truncation: MultiIndex) -> list[SeriesElement]:
        return [
            SeriesElement.from_terms(
                [_branch_series(branch, limit) for branch, limit in zip(gen, truncation)], truncation
            )
            for gen in description.generators or []
        ]

    return factory


def condition_rows(description: InputDescription) -> list[list[ConditionTerm]]:
    return [[(b, e, c) for b, e, c in row] for row in description.conditions or []]


class LoadedInput(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    description: InputDescription
    semigroup: SemigroupData
    model: LocalRingModel | None = None
    field_model: LocalRingModel | None = None

    @property
    def source(self) -> str:
        return self.description.name or self.description.mode


def load_input(
    description: InputDescription,
    truncation: MultiIndex | None = None,
    start: int = DEFAULT_START_TRUNCATION,
    max_norm: int = DEFAULT_MAX_TRUNCATION_NORM,
    field_model: bool = False,
) -> LoadedInput:
    """
    Run the pipeline of the input's mode. `truncation` overrides the one in the input.
    With `field_model`, numerical semigroups also get their monomial ring, which the
    finite-field checks need.
    """
    d = description.d
    if truncation is None and description.truncation is not None:
        truncation = tuple(description.truncation)
    if truncation is not None and len(truncation) != d:
        raise InputError(f"truncation {truncation} does not have {d} entries")
    resolve = functools.partial(resolve_model, d=d, truncation=truncation, start=start, max_norm=max_norm)
    match description.mode:
        case "parametrization":
            model = resolve(functools.partial(build_from_generators, generator_factory(description)))
            return LoadedInput(description=description, semigroup=semigroup_box(model), model=model, field_model=model)
        case "linear_conditions":
            model = resolve(functools.partial(build_from_conditions, condition_rows(description), d))
            return LoadedInput(description=description, semigroup=semigroup_box(model), model=model, field_model=model)
        case "numerical_semigroup":
            gens = description.semigroup_generators or []
            S = from_numerical_generators(gens)
            monomial_ring = None
            if field_model:

                def monomials(trunc: MultiIndex) -> list[SeriesElement]:
                    return [SeriesElement.monomial((g,), trunc) for g in gens]

                monomial_ring = resolve(functools.partial(build_from_generators, monomials))
            return LoadedInput(description=description, semigroup=S, field_model=monomial_ring)
        case _:
            S = from_box(description.conductor or [], description.elements or [])
            return LoadedInput(description=description, semigroup=S)
