"""Input file models for group specifications and character table data."""

from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from genhamilton.core.models.degrees import CharTableData
from genhamilton.core.services.permcore import Permutation, PermGroupError

GeneratorEncoding = list[int] | str


def parse_generator(encoding: GeneratorEncoding, degree: int) -> Permutation:
    """Turn an image array or a cycle string into a permutation.

    Raises:
        PermGroupError: If the encoding is invalid for the degree
    """
    if isinstance(encoding, str):
        return Permutation.from_cycles(encoding, degree)
    if len(encoding) != degree:
        raise PermGroupError(f"Image array {encoding} does not have length {degree}")
    return Permutation(encoding)


class GroupSpecFile(BaseModel):
    """A permutation group given by generators, with optional subgroup lists."""

    name: str | None = None
    degree: int = Field(ge=1)
    generators: list[GeneratorEncoding] = Field(default_factory=list)
    normal_subgroups: list[list[GeneratorEncoding]] | None = None
    maximal_subgroups: list[list[GeneratorEncoding]] | None = None

    @model_validator(mode="after")
    def check_generators(self) -> "GroupSpecFile":
        lists = [self.generators]
        lists.extend(self.normal_subgroups or [])
        lists.extend(self.maximal_subgroups or [])
        for gens in lists:
            for encoding in gens:
                try:
                    parse_generator(encoding, self.degree)
                except PermGroupError as e:
                    raise ValueError(str(e)) from e
        return self

    def permutations(self, gens: list[GeneratorEncoding] | None = None) -> list[Permutation]:
        """Parse a generator list (the group's own by default)."""
        encodings = self.generators if gens is None else gens
        return [parse_generator(encoding, self.degree) for encoding in encodings]


class CharTableFile(BaseModel):
    """Class lengths, element orders and primitive permutation characters of a group."""

    name: str
    class_lengths: list[int]
    element_orders: list[int]
    permutation_characters: list[list[int]] | None = None

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("name must not be empty")
        return v

    @model_validator(mode="after")
    def check_data(self) -> "CharTableFile":
        self.to_data()
        return self

    @property
    def has_characters(self) -> bool:
        return bool(self.permutation_characters)

    def to_data(self) -> CharTableData:
        return CharTableData(
            class_lengths=tuple(self.class_lengths),
            element_orders=tuple(self.element_orders),
            characters=tuple(tuple(c) for c in self.permutation_characters or []),
        )

    @classmethod
    def from_data(cls, name: str, data: CharTableData) -> "CharTableFile":
        return cls(
            name=name,
            class_lengths=list(data.class_lengths),
            element_orders=list(data.element_orders),
            permutation_characters=[list(c.values) for c in data.characters],
        )

    def to_document(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)
