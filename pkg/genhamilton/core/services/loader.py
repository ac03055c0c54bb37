"""Reading group specifications and character table files."""

import json
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from genhamilton.core.models.files import CharTableFile, GeneratorEncoding, GroupSpecFile
from genhamilton.core.services.permcore import (
    PermGroup,
    PermGroupError,
    find_faithful_orbit,
    group_from_generators,
    is_normal,
    restrict_action,
    subgroup_from_generators,
)
from genhamilton.core.utils.logger import event_log, logger


class LoaderError(Exception):
    """Raised when an input file cannot be read or validated."""

    pass


def read_document(path: Path) -> dict[str, Any]:
    """Read a JSON or YAML mapping from disk.

    Files ending in ``.yaml`` or ``.yml`` are parsed as YAML, all others as JSON.

    Raises:
        LoaderError: If the file is unreadable or not a mapping
    """
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as e:
        raise LoaderError(f"Failed to read {path}: {e}") from e

    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            document = yaml.safe_load(content)
        else:
            document = json.loads(content)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise LoaderError(f"Failed to parse {path}: {e}") from e

    if not isinstance(document, dict):
        raise LoaderError(f"{path} must contain a mapping at the top level")
    return document


def load_group_spec(path: Path) -> GroupSpecFile:
    """Parse a group specification file.

    Raises:
        LoaderError: If the file is unreadable or invalid
    """
    document = read_document(path)
    try:
        spec = GroupSpecFile.model_validate(document)
    except ValidationError as e:
        raise LoaderError(f"Invalid group file {path}: {e}") from e
    if spec.name is None:
        spec = spec.model_copy(update={"name": path.stem})
    return spec


def load_chartable_file(path: Path) -> CharTableFile:
    """Parse a character table data file.

    Raises:
        LoaderError: If the file is unreadable or invalid
    """
    document = read_document(path)
    try:
        return CharTableFile.model_validate(document)
    except ValidationError as e:
        raise LoaderError(f"Invalid character table file {path}: {e}") from e


class LoadedGroup:
    """A group built from a specification file, ready for analysis.

    If the generators act intransitively, the group and all listed subgroups
    are replaced by their action on the first faithful orbit.
    """

    def __init__(
        self,
        name: str,
        group: PermGroup,
        normal_subgroups: list[PermGroup] | None,
        maximal_subgroups: list[PermGroup] | None,
        original_degree: int,
    ) -> None:
        self.name = name
        self.group = group
        self.normal_subgroups = normal_subgroups
        self.maximal_subgroups = maximal_subgroups
        self.original_degree = original_degree


def build_group(spec: GroupSpecFile, cap: int) -> LoadedGroup:
    """Enumerate the group of a specification and its listed subgroups.

    Raises:
        OrderCapExceededError: If the group is larger than ``cap``
        NoFaithfulConstituentError: If an intransitive group has no faithful orbit
        LoaderError: If a listed subgroup is not a (normal) subgroup
    """
    generators = spec.permutations()
    group = group_from_generators(spec.degree, generators, cap)
    event_log(
        "group_built",
        {"name": spec.name, "degree": spec.degree, "order": group.order},
    )

    original = group
    orbit = None
    if not group.transitive:
        orbit = find_faithful_orbit(group)
        group = group_from_generators(len(orbit), restrict_action(generators, orbit), cap)
        logger.info(f"{spec.name}: using the faithful action on {len(orbit)} points")

    def subgroups(lists: list[list[GeneratorEncoding]] | None, kind: str) -> list[PermGroup] | None:
        if lists is None:
            return None
        result = []
        for position, encodings in enumerate(lists, start=1):
            gens = spec.permutations(encodings)
            outside = [g for g in gens if g not in original]
            if outside:
                raise LoaderError(
                    f"{spec.name}: {kind} subgroup {position}: {outside[0]} is not in the group"
                )
            if orbit is not None:
                gens = restrict_action(gens, orbit)
            try:
                result.append(subgroup_from_generators(group, gens))
            except PermGroupError as e:
                raise LoaderError(f"{spec.name}: {kind} subgroup {position}: {e}") from e
        return result

    normal = subgroups(spec.normal_subgroups, "normal")
    for position, sub in enumerate(normal or [], start=1):
        if sub.order >= group.order or not is_normal(group, sub):
            raise LoaderError(f"{spec.name}: normal subgroup {position} is not a proper normal subgroup")
    maximal = subgroups(spec.maximal_subgroups, "maximal")

    return LoadedGroup(
        name=spec.name or "group",
        group=group,
        normal_subgroups=normal,
        maximal_subgroups=maximal,
        original_degree=spec.degree,
    )
