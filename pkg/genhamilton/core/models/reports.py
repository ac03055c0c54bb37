"""Report models for criterion checks, verdicts and searches."""

import math
from fractions import Fraction
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from genhamilton.core.models.degrees import fraction_to_json, to_fraction


class Interval(BaseModel):
    """Closed interval [low, high] of positions in the sorted degree sequence."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    low: Fraction
    high: Fraction

    @field_validator("low", "high", mode="before")
    @classmethod
    def coerce_endpoint(cls, v: Any) -> Fraction:
        return to_fraction(v)

    @model_validator(mode="after")
    def check_order(self) -> "Interval":
        if self.low > self.high:
            raise ValueError(f"empty interval [{self.low}, {self.high}]")
        return self

    @field_serializer("low", "high")
    def serialize_endpoint(self, value: Fraction) -> int | str:
        return fraction_to_json(value)

    def contains_integer(self) -> bool:
        return math.ceil(self.low) <= math.floor(self.high)

    def as_pair(self) -> list[int | str]:
        return [fraction_to_json(self.low), fraction_to_json(self.high)]


DataTriple = tuple[Fraction, int, int]


class CriterionReport(BaseModel):
    """Outcome of the interval sweep for one degree matrix.

    ``data`` holds one (degree bound, class length, class position) triple
    per nonidentity class, sorted ascending; class positions are 1-based
    with the identity class at position 1.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bad_for_posa: tuple[Interval, ...] = ()
    bad_for_chvatal: tuple[Interval, ...] = ()
    data: tuple[DataTriple, ...] = ()
    closure_index: int = Field(default=0, ge=0)

    @field_serializer("data")
    def serialize_data(self, data: tuple[DataTriple, ...]) -> list[list[int | str]]:
        return [[fraction_to_json(bound), length, position] for bound, length, position in data]

    @property
    def posa_ok(self) -> bool:
        return not self.bad_for_posa

    @property
    def chvatal_ok(self) -> bool:
        return not self.bad_for_chvatal


class HamiltonianInfo(BaseModel):
    """First closure indices at which each criterion holds, with the rendered verdict."""

    model_config = ConfigDict(frozen=True)

    posa_closure: int | None = None
    chvatal_closure: int | None = None
    rendered: str
    iterations: int = 0
    reports: tuple[CriterionReport, ...] = ()

    @model_validator(mode="after")
    def check_closure_order(self) -> "HamiltonianInfo":
        if self.posa_closure is not None:
            if self.chvatal_closure is None or self.chvatal_closure > self.posa_closure:
                raise ValueError("Posa at closure k implies Chvatal at some closure <= k")
        return self


class L2qReport(BaseModel):
    """Outcome of the three degree checks used for groups L2(q)."""

    model_config = ConfigDict(frozen=True)

    large_orders_ok: bool
    order2_ok: bool
    order3to5_ok: bool
    large_order_failures: tuple[int, ...] = ()
    order2_failures: tuple[int, ...] = ()
    order3to5_failures: tuple[int, ...] = ()
    field_size: int | None = None

    @property
    def all_ok(self) -> bool:
        return self.large_orders_ok and self.order2_ok and self.order3to5_ok


class CycleSearchResult(BaseModel):
    """Outcome of the Hamiltonian cycle search on an explicit graph.

    ``cycle`` lists vertex indices in visiting order when a witness was found.
    """

    model_config = ConfigDict(frozen=True)

    status: Literal["witness", "none", "budget_exhausted"]
    cycle: tuple[int, ...] | None = None
    backtracks: int = 0

    @model_validator(mode="after")
    def check_witness(self) -> "CycleSearchResult":
        if (self.status == "witness") != (self.cycle is not None):
            raise ValueError("a cycle is present exactly when the status is 'witness'")
        return self
