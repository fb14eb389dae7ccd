import itertools

import pytest
from hypothesis import given, settings, strategies as st

from depthcalc.affine import (
    AffineConfig, SigmaAction, cartan_decomposition, cartan_orbits, im_length, multiply,
    sigma_fixed_waff,
)
from depthcalc.errors import ValidationError
from depthcalc.rootdata import GaloisAction, PRESETS, coinvariants, preset

CFG = {name: AffineConfig(preset(name)) for name in ("SL2", "PGL2", "GL2", "A2", "B2", "G2")}


def test_lengths_basic():
    cfg = CFG["SL2"]
    s, s0 = cfg.simple_reflections()
    assert im_length(cfg, cfg.identity()) == 0
    assert im_length(cfg, s) == 1 and im_length(cfg, s0) == 1
    assert im_length(cfg, cfg.element([1])) == 2


def test_translation_product():
    # (t_nu u)(t_mu u^-1) = t_{nu + u mu}
    cfg = CFG["A2"]
    u = cfg.simple_reflections()[0]
    nu, mu = (1, 0), (0, 1)
    prod = multiply(cfg.element(nu) * u, cfg.element(mu) * cfg.inverse(u))
    umu = [sum(r[j] * mu[j] for j in range(2)) for r in cfg.weyl[u.finite]]
    assert prod == cfg.element([a + b for a, b in zip(nu, umu)])


def test_sl2_translation_times_inverse():
    cfg = CFG["SL2"]
    s = cfg.simple_reflections()[0]
    nu, mu = cfg.element([2]) * s, cfg.element([1]) * s
    assert multiply(nu, cfg.inverse(mu)) == cfg.element([1])


@pytest.mark.parametrize("name", list(CFG))
def test_simple_reflections_are_involutions_of_length_one(name):
    cfg = CFG[name]
    for s in cfg.simple_reflections():
        assert im_length(cfg, s) == 1
        assert s * s == cfg.identity()
        assert s.in_waff()


@pytest.mark.parametrize("name,count", [("SL2", 1), ("PGL2", 2), ("A2", 3), ("B2", 2), ("G2", 1)])
def test_length_zero_elements_match_omega(name, count):
    cfg = CFG[name]
    zero = [cfg.element(lam, w) for lam in itertools.product(range(-2, 3), repeat=cfg.rank)
            for w in range(len(cfg.weyl)) if im_length(cfg, cfg.element(lam, w)) == 0]
    assert len(zero) == count == cfg.omega.order


def _random_element(cfg, data):
    lam = data.draw(st.lists(st.integers(-2, 2), min_size=cfg.rank, max_size=cfg.rank))
    w = data.draw(st.integers(0, len(cfg.weyl) - 1))
    return cfg.element(lam, w)


@settings(max_examples=60)
@given(st.sampled_from(list(CFG)), st.data())
def test_group_axioms_and_length(name, data):
    cfg = CFG[name]
    a, b, c = (_random_element(cfg, data) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * cfg.inverse(a) == cfg.identity()
    assert im_length(cfg, a * b) <= im_length(cfg, a) + im_length(cfg, b)
    assert im_length(cfg, cfg.inverse(a)) == im_length(cfg, a)
    for s in cfg.simple_reflections():
        assert abs(im_length(cfg, s * a) - im_length(cfg, a)) == 1


@settings(max_examples=40)
@given(st.sampled_from(["PGL2", "A2", "B2"]), st.data())
def test_omega_conjugation_preserves_length(name, data):
    cfg = CFG[name]
    a = _random_element(cfg, data)
    omegas = [cfg.element(lam, w) for lam in itertools.product(range(-1, 2), repeat=cfg.rank)
              for w in range(len(cfg.weyl)) if im_length(cfg, cfg.element(lam, w)) == 0]
    for o in omegas:
        assert im_length(cfg, o * a * cfg.inverse(o)) == im_length(cfg, a)


@settings(max_examples=40)
@given(st.data())
def test_sigma_is_automorphism(data):
    cfg = CFG["A2"]
    sigma = SigmaAction(cfg, [[-1, 0], [0, -1]])
    a, b = _random_element(cfg, data), _random_element(cfg, data)
    assert sigma(a * b) == sigma(a) * sigma(b)
    assert sigma(sigma(a)) == a


def test_sl2_minus_one_fixed_points():
    cfg = CFG["SL2"]
    rep = sigma_fixed_waff(cfg, SigmaAction(cfg, [[-1]]), 3)
    assert rep.elliptic and not rep.stable_positive_system
    assert not rep.hypotheses_hold
    assert len(rep.elements) == 2
    assert "no sigma-stable positive system" in rep.warnings


def test_sigma_rejects_non_root_automorphism():
    with pytest.raises(ValidationError):
        SigmaAction(CFG["GL2"], [[1, 0], [0, -1]])
    with pytest.raises(ValidationError):
        sigma_fixed_waff(CFG["SL2"], SigmaAction(CFG["SL2"], [[1]]), 0)


def _root_preserving(rd):
    vals = (-1, 0, 1)
    for entries in itertools.product(vals, repeat=rd.rank * rd.rank):
        M = [list(entries[i * rd.rank:(i + 1) * rd.rank]) for i in range(rd.rank)]
        try:
            yield SigmaAction(AFFINE_BY_NAME[rd.name], M)
        except ValidationError:
            continue


AFFINE_BY_NAME = {name: AffineConfig(preset(name)) for name in PRESETS}


@pytest.mark.parametrize("name", PRESETS)
def test_sweep_hypotheses_imply_only_identity(name):
    cfg = AFFINE_BY_NAME[name]
    seen = 0
    for sigma in _root_preserving(cfg.rd):
        rep = sigma_fixed_waff(cfg, sigma, 2)
        seen += 1
        if rep.hypotheses_hold:
            assert rep.only_identity, (name, sigma.matrix)
    assert seen >= 1


def test_cartan_orbits_on_integers():
    Z = coinvariants(1, [])
    assert len(cartan_orbits(Z, [[[-1]]], 3)) == 4
    assert len(cartan_orbits(Z, [], 3)) == 7


def test_cartan_split_matches_dominant_count():
    rep = cartan_decomposition(preset("SL2"), GaloisAction.trivial(1), 3)
    assert len(rep.orbits) == len(rep.split_orbits) == 4


def test_cartan_anisotropic_sl2():
    rep = cartan_decomposition(preset("SL2"), GaloisAction((), [[-1]]), 3)
    assert rep.fixed_group.is_trivial()
    assert len(rep.orbits) == 1


@pytest.mark.parametrize("name", ["A1", "SL2"])
def test_trivial_sigma_rank_one_ball(name):
    # five coroot translations in the ball, each with both Weyl elements
    cfg = AFFINE_BY_NAME[name]
    rep = sigma_fixed_waff(cfg, SigmaAction(cfg, [[1]]), 2)
    assert len(rep.elements) == 10
    assert len({a.translation for a in rep.elements}) == 5
    assert not rep.elliptic
