from importlib import resources

import pytest

from simplex_designs import parse_incidence
from simplex_designs.geometry import geometry_for_dimension

FIXTURE_NAMES = ("c1", "c2", "c3", "c4", "non_centered")


def fixture_text(name: str, kind: str = "incidence") -> str:
    return (
        resources.files("simplex_designs.fixtures")
        .joinpath(f"{name}.{kind}.txt")
        .read_text()
    )


@pytest.fixture(scope="session")
def g7():
    return geometry_for_dimension(3)


@pytest.fixture(scope="session")
def g15():
    return geometry_for_dimension(4)


@pytest.fixture(scope="session")
def fixture_designs():
    return {name: parse_incidence(fixture_text(name)) for name in FIXTURE_NAMES}
