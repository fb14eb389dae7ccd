import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from depthcalc import fixtures as fx
from depthcalc.errors import ValidationError
from depthcalc.plcalc import PLFunction, evaluate
from depthcalc.ramification import (
    RamificationProfile, herbrand_phi, herbrand_psi, is_tame, lower_jumps, normalized_phi,
    tower_phi, upper_jumps,
)

F = Fraction
WQ = fx.WILD_QUADRATIC


def test_wild_quadratic_values():
    phi = herbrand_phi(WQ)
    assert phi(1) == 1
    assert phi(3) == 2
    assert herbrand_psi(WQ)(F(3, 2)) == 2
    assert [s for s, _ in upper_jumps(WQ).jumps] == [F(1)]
    assert lower_jumps(WQ) == ((F(1), 1),)


def test_tame_normalized_phi_is_identity():
    for prof in fx.TAME_PROFILES.values():
        assert is_tame(prof)
        assert normalized_phi(prof) == PLFunction.identity()
    assert normalized_phi(WQ) != PLFunction.identity()


def test_tame_upper_jump_at_zero():
    assert upper_jumps(RamificationProfile.tame(3, 2)).jumps == ((F(0), 1),)
    assert upper_jumps(RamificationProfile.unramified(3)).jumps == ()


def test_conventions_tolerated():
    a = RamificationProfile(3, 6, steps=((0, 6), (2, 3), (5, 1)))
    assert a == fx.CYCLOTOMIC_P3["zeta9/Q3"]


@pytest.mark.parametrize("bad", [
    dict(p=4, e=1), dict(p=2, e=0),
    dict(p=2, e=4, steps=((2, 2), (1, 4))),
    dict(p=3, e=6, steps=((1, 2),)),
    dict(p=2, e=2, steps=((1, 4),)),
])
def test_invalid_profiles(bad):
    with pytest.raises(ValidationError):
        RamificationProfile(**bad)


def test_json_roundtrip():
    for prof in fx.CYCLOTOMIC_P3.values():
        assert RamificationProfile.from_json(prof.to_json()) == prof
    with pytest.raises(ValidationError):
        RamificationProfile.from_json({"e": 2})


def test_cyclotomic_upper_jumps_are_integers():
    # upper jumps of Q3(zeta_27)/Q3 sit at 0, 1, 2
    U = upper_jumps(fx.CYCLOTOMIC_P3["zeta27/Q3"])
    assert [s for s, _ in U.jumps] == [0, 1, 2]


@pytest.mark.parametrize("bottom,top,comp", fx.CYCLOTOMIC_TOWERS)
def test_cyclotomic_towers(bottom, top, comp):
    P = fx.CYCLOTOMIC_P3
    assert tower_phi(herbrand_phi(P[bottom]), herbrand_phi(P[top])) == herbrand_phi(P[comp])


def test_cyclic_tower_matches_cyclotomic():
    H, Q = fx.cyclic_tower(fx.CYCLOTOMIC_P3["zeta27/Q3"], 3)
    assert H == fx.CYCLOTOMIC_P3["zeta27/zeta9"]
    assert Q == fx.CYCLOTOMIC_P3["zeta9/Q3"]


@given(st.integers(0, 10**6))
def test_synthetic_tower_transitivity(seed):
    Q, H, G = fx.random_tower(random.Random(seed))
    assert tower_phi(herbrand_phi(Q), herbrand_phi(H)) == herbrand_phi(G)


@given(st.integers(0, 10**6), st.fractions(min_value=0, max_value=40, max_denominator=6))
def test_phi_matches_direct_integral(seed, t):
    prof = fx.random_profile(random.Random(seed))
    assert evaluate(herbrand_phi(prof), t) == fx._integral(prof.e, prof.steps, t)
    assert herbrand_psi(prof)(herbrand_phi(prof)(t)) == t


@given(st.integers(0, 10**6))
def test_upper_jumps_roundtrip(seed):
    prof = fx.random_profile(random.Random(seed))
    psi = herbrand_psi(prof)
    lower = lower_jumps(prof)
    upper = upper_jumps(prof).jumps
    assert [(evaluate(psi, s), n) for s, n in upper] == list(lower)
