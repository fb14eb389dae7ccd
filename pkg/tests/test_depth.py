import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from depthcalc import fixtures as fx
from depthcalc.depth import (
    GroupVertexDatum, InducedTorusDatum, TorusDatum, char_param_std_depth, check_phi_bound,
    depth_roundtrip_induced, depth_transfer_group, depth_transfer_induced, depth_transfer_torus,
    ell_bound_group, ell_bound_torus, param_depth_general, param_depth_induced, root_bound_check,
)
from depthcalc.errors import ValidationError
from depthcalc.plcalc import PLFunction
from depthcalc.ramification import RamificationProfile

F = Fraction
WQ = fx.WILD_QUADRATIC
TAME3 = RamificationProfile.tame(2, 3)


def test_examples():
    assert param_depth_induced(InducedTorusDatum((WQ,)), [F(3, 2)]) == 1
    assert char_param_std_depth(TAME3, 2) == 2
    assert param_depth_general(1, F(3, 2)) == F(3, 2)
    assert root_bound_check(WQ, 1, 1) is False
    assert root_bound_check(WQ, 1, 2) is True


def test_ell_bounds():
    T = TorusDatum.induced(fx.STRICTNESS_TORUS)
    assert ell_bound_torus(T, 0) == 1
    assert ell_bound_torus(T, 1) == 2
    assert ell_bound_torus(TorusDatum.induced(InducedTorusDatum((TAME3,))), 3) == 3


def test_strictness_example():
    T = TorusDatum.induced(fx.STRICTNESS_TORUS)
    phi = depth_transfer_torus(T)
    assert phi(1) == F(3, 2)
    # a character trivial on the wild factor: standard depth 1 < Phi_T(1)
    dep_std = char_param_std_depth(RamificationProfile.unramified(2), 1)
    assert dep_std == 1 < phi(1)
    assert check_phi_bound(T, 1, dep_std)


def test_tame_transfer_is_identity():
    # mixed residue characteristic is rejected
    with pytest.raises(ValidationError):
        InducedTorusDatum((fx.TAME_PROFILES["tame-p2-e3"], fx.TAME_PROFILES["tame-p3-e2"]))
    R = InducedTorusDatum((fx.TAME_PROFILES["unramified-p2"], fx.TAME_PROFILES["tame-p2-e3"]))
    assert depth_transfer_induced(R) == PLFunction.identity()


def test_group_includes_root_fields():
    base = TorusDatum.induced(InducedTorusDatum((RamificationProfile.unramified(2),)))
    V = GroupVertexDatum((base,), (WQ,))
    assert depth_transfer_group(V)(1) == F(3, 2)
    assert ell_bound_group(V, 1) == 2
    assert GroupVertexDatum.from_json(V.to_json()) == V


def test_validation():
    R = InducedTorusDatum((WQ,))
    with pytest.raises(ValidationError):
        param_depth_induced(R, [1, 2])
    with pytest.raises(ValidationError):
        param_depth_induced(R, [-1])
    with pytest.raises(ValidationError):
        root_bound_check(WQ, 1, 0)
    with pytest.raises(ValidationError):
        InducedTorusDatum(())


@given(st.integers(0, 10**6), st.fractions(min_value=0, max_value=20, max_denominator=12))
def test_roundtrip_identity(seed, r):
    R = fx.random_induced_torus(random.Random(seed))
    assert depth_roundtrip_induced(R, r) == r


@given(st.integers(0, 10**6), st.fractions(min_value=0, max_value=20, max_denominator=12))
def test_phi_bound_on_random_characters(seed, r):
    rng = random.Random(seed)
    R = fx.random_induced_torus(rng)
    # a character of depth r on one factor, depth <= r elsewhere
    std = [char_param_std_depth(E, r * rng.randint(0, 1)) for E in R.components]
    std[rng.randrange(len(std))] = None
    std = [char_param_std_depth(E, r) if s is None else s
           for E, s in zip(R.components, std)]
    dep = param_depth_induced(R, std)
    assert dep == r
    T = TorusDatum.induced(R)
    assert check_phi_bound(T, dep, max(std))
    assert depth_transfer_torus(T)(r) >= max(std)
    assert ell_bound_torus(T, r) >= depth_transfer_torus(T)(r)


def test_json_roundtrip():
    T = TorusDatum(((fx.STRICTNESS_TORUS, "a"), (InducedTorusDatum((TAME3,)), "b")))
    assert TorusDatum.from_json(T.to_json()) == T
    assert TorusDatum.from_json(fx.STRICTNESS_TORUS.to_json()) == TorusDatum.induced(fx.STRICTNESS_TORUS)
