"""Degree matrix and character table data models."""

from fractions import Fraction
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


def to_fraction(value: Any) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to an exact rational.

    Floats and booleans are rejected.
    """
    if isinstance(value, bool):
        raise ValueError(f"Not an exact rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not an exact rational: {value!r}") from e
    raise ValueError(f"Not an exact rational: {value!r}")


def fraction_to_json(value: Fraction) -> int | str:
    """Integers as JSON numbers, everything else as ``"p/q"``."""
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


class DegreeMatrix(BaseModel):
    """Class-indexed vertex degrees of the generating graph.

    Row i and column j refer to the (i+1)-th and (j+1)-th conjugacy class;
    the identity class is left out. ``entries[i][j]`` is the number (or a
    lower bound for the number) of neighbours in class j+1 of a vertex in
    class i+1.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    class_lengths: tuple[int, ...]
    entries: tuple[tuple[Fraction, ...], ...]
    kind: Literal["exact", "lower_bound"]
    closure_index: int = Field(default=0, ge=0)

    @field_validator("entries", mode="before")
    @classmethod
    def coerce_entries(cls, v: Any) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(to_fraction(x) for x in row) for row in v)

    @model_validator(mode="after")
    def check_shape(self) -> "DegreeMatrix":
        lengths = self.class_lengths
        if not lengths or lengths[0] != 1:
            raise ValueError("class_lengths must start with the identity class length 1")
        if any(c < 1 for c in lengths):
            raise ValueError("class lengths must be positive")
        n = len(lengths) - 1
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise ValueError(f"entries must be a {n}x{n} matrix")
        for row in self.entries:
            for j, value in enumerate(row):
                if value < 0 or value > lengths[j + 1]:
                    raise ValueError(
                        f"entry {value} outside [0, {lengths[j + 1]}] for class {j + 2}"
                    )
                if self.kind == "exact" and value.denominator != 1:
                    raise ValueError(f"exact matrix has non-integral entry {value}")
        return self

    @field_serializer("entries")
    def serialize_entries(self, entries: tuple[tuple[Fraction, ...], ...]) -> list[list[int | str]]:
        return [[fraction_to_json(x) for x in row] for row in entries]

    @property
    def size(self) -> int:
        """Group order, the sum of all class lengths."""
        return sum(self.class_lengths)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def row_sums(self) -> list[Fraction]:
        """Vertex degree (or its lower bound) for each nonidentity class."""
        return [sum(row, Fraction(0)) for row in self.entries]


class CharacterVector(BaseModel):
    """Values of a primitive permutation character on the conjugacy classes."""

    model_config = ConfigDict(frozen=True)

    values: tuple[int, ...]

    @field_validator("values")
    @classmethod
    def validate_values(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v:
            raise ValueError("character must have at least one value")
        if v[0] < 1:
            raise ValueError("character degree must be positive")
        if any(x < 0 or x > v[0] for x in v):
            raise ValueError("permutation character values must lie in [0, degree]")
        return v

    @property
    def degree(self) -> int:
        return self.values[0]


class CharTableData(BaseModel):
    """Class data of a group together with its primitive permutation characters."""

    model_config = ConfigDict(frozen=True)

    class_lengths: tuple[int, ...]
    element_orders: tuple[int, ...]
    characters: tuple[CharacterVector, ...] = ()

    @field_validator("characters", mode="before")
    @classmethod
    def coerce_characters(cls, v: Any) -> Any:
        return tuple(
            CharacterVector(values=tuple(c)) if isinstance(c, (list, tuple)) else c for c in v
        )

    @model_validator(mode="after")
    def check_consistency(self) -> "CharTableData":
        n = len(self.class_lengths)
        if n == 0 or self.class_lengths[0] != 1:
            raise ValueError("class_lengths must start with the identity class length 1")
        if any(c < 1 for c in self.class_lengths):
            raise ValueError("class lengths must be positive")
        if len(self.element_orders) != n:
            raise ValueError(
                f"element_orders has {len(self.element_orders)} entries, expected {n}"
            )
        if self.element_orders[0] != 1 or any(o < 1 for o in self.element_orders):
            raise ValueError("element orders must be positive, with 1 for the identity class")
        order = self.group_order
        for position, character in enumerate(self.characters, start=1):
            if len(character.values) != n:
                raise ValueError(
                    f"character {position} has {len(character.values)} values, expected {n}"
                )
            if order % character.degree:
                raise ValueError(
                    f"character {position} has degree {character.degree} not dividing {order}"
                )
            if sum(c * x for c, x in zip(self.class_lengths, character.values)) != order:
                raise ValueError(f"character {position} is not a transitive permutation character")
        return self

    @property
    def group_order(self) -> int:
        return sum(self.class_lengths)
