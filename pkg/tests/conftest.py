from pathlib import Path

import pytest

from housealloc.model import validate_instance

FIXTURES = Path(__file__).parent / "fixtures"


def make_e1():
    # 5 agents, 6 houses; agents 1-4 endowed with h1-h4; agent 5 unendowed.
    return validate_instance(
        agents=["1", "2", "3", "4", "5"],
        houses=["h1", "h2", "h3", "h4", "h5", "h6"],
        endowment={"1": "h1", "2": "h2", "3": "h3", "4": "h4"},
        acceptable={
            "1": {"h2"},
            "2": {"h3"},
            "3": {"h1"},
            "4": {"h5"},
            "5": {"h5", "h6"},
        },
    )


def make_e2():
    # Two agents, both owning a house they do not want; agent 1 wants 2's.
    return validate_instance(
        agents=["1", "2"],
        houses=["h1", "h2"],
        endowment={"1": "h1", "2": "h2"},
        acceptable={"1": {"h2"}, "2": set()},
    )


def make_e3():
    # Four agents in two crossing pairs: 1 and 4 want h2, 2 and 3 want h1.
    return validate_instance(
        agents=["1", "2", "3", "4"],
        houses=["h1", "h2", "h3", "h4"],
        endowment={"1": "h1", "2": "h2", "3": "h3", "4": "h4"},
        acceptable={"1": {"h2"}, "2": {"h1"}, "3": {"h1"}, "4": {"h2"}},
    )


@pytest.fixture
def e1():
    return make_e1()


@pytest.fixture
def e2():
    return make_e2()


@pytest.fixture
def e3():
    return make_e3()
