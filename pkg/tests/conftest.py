import pathlib

import pytest

from wproj import WPoly, classify, parse_wpoly_file

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def l2_text() -> str:
    return (FIXTURES / "l2.wpoly").read_text()


@pytest.fixture(scope="session")
def l2_poly(l2_text) -> WPoly:
    weights, polys = parse_wpoly_file(l2_text)
    assert tuple(weights.values()) == (2, 4, 6, 10)
    return polys[0]


@pytest.fixture(scope="session")
def w24610():
    return classify([2, 4, 6, 10])
