import random

import pytest

from depthcalc import fixtures
from depthcalc.errors import ValidationError
from depthcalc.ramification import RamificationProfile


@pytest.mark.parametrize("name", fixtures.names())
def test_every_fixture_loads(name):
    assert fixtures.get(name) is not None


def test_unknown_fixture():
    with pytest.raises(ValidationError):
        fixtures.get("nope")


def test_cyclic_tower_degrees_multiply():
    rng = random.Random(7)
    for _ in range(200):
        Q, H, G = fixtures.random_tower(rng)
        assert Q.e * H.e == G.e
        assert Q.p == H.p == G.p


def test_cyclic_tower_rejects_non_divisor():
    with pytest.raises(ValidationError):
        fixtures.cyclic_tower(RamificationProfile(3, 6, steps=((2, 3),)), 4)
