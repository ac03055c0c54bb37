"""Shared fixtures for genhamilton tests."""

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from genhamilton.core.config import AnalysisConfig
from genhamilton.core.services.permcore import PermGroup, Permutation, group_from_generators

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
GROUPS = CORPUS / "groups"
CHARTABLES = CORPUS / "chartables"

# Property tests run under the autouse environment fixture below.
settings.register_profile(
    "genhamilton", suppress_health_check=[HealthCheck.function_scoped_fixture], deadline=None
)
settings.load_profile("genhamilton")


def perm(encoding: str | list[int], degree: int) -> Permutation:
    """Permutation from cycle notation or a 1-based image array."""
    if isinstance(encoding, str):
        return Permutation.from_cycles(encoding, degree)
    return Permutation(encoding)


def make_group(degree: int, *generators: str | list[int]) -> PermGroup:
    """Group generated by the given cycle strings or image arrays."""
    return group_from_generators(degree, [perm(g, degree) for g in generators], cap=100_000)


@pytest.fixture
def s3() -> PermGroup:
    return make_group(3, "(1,2)", "(1,2,3)")


@pytest.fixture
def s4() -> PermGroup:
    return make_group(4, "(1,2)", "(1,2,3,4)")


@pytest.fixture
def a4() -> PermGroup:
    return make_group(4, "(1,2,3)", "(1,2)(3,4)")


@pytest.fixture
def d8() -> PermGroup:
    return make_group(4, [2, 3, 4, 1], [2, 1, 4, 3])


@pytest.fixture
def q8() -> PermGroup:
    return make_group(8, [3, 4, 2, 1, 8, 7, 5, 6], [5, 6, 7, 8, 2, 1, 4, 3])


@pytest.fixture
def a5() -> PermGroup:
    return make_group(5, "(1,2,3)", "(1,2,3,4,5)")


@pytest.fixture
def s5() -> PermGroup:
    return make_group(5, "(1,2)", "(1,2,3,4,5)")


@pytest.fixture
def psl32() -> PermGroup:
    return make_group(7, "(1,2,3,4,5,6,7)", "(3,7)(5,6)")


@pytest.fixture
def config() -> AnalysisConfig:
    """Defaults, independent of the environment."""
    return AnalysisConfig.model_construct(
        group_order_cap=100_000,
        quotient_cap=4096,
        oracle_cap=360,
        search_budget=100_000_000,
        log_level="INFO",
        quiet_posa0=False,
        json_output=False,
        jobs=1,
        config_file=None,
    )


@pytest.fixture(autouse=True)
def _isolate_environment(monkeypatch, tmp_path):
    """Keep GENHAM_* variables and stray config files out of the tests."""
    import os

    for key in list(os.environ):
        if key.startswith("GENHAM_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
