from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from depthcalc.affine import AffineConfig
from depthcalc.errors import ValidationError
from depthcalc.finitemodels import (
    TruncRing, build_group, hecke_structure_constants, iwahori_subgroup,
)
from depthcalc.hecke import (
    Cocycle, CoxeterSystem, CyclotomicField, OmegaGroup, algebra_from_json, build_block_algebra,
    check_associativity, check_braid, check_omega_automorphism, check_quadratic,
    compare_with_finite_oracle, coxeter_from_affine, cyclotomic_polynomial, klein_cocycle,
    match_presentations, omega_from_affine, q_from_induction, relabel_algebra,
)
from depthcalc.rootdata import preset


def _affine(name, q=3):
    cfg = AffineConfig(preset(name))
    cox = coxeter_from_affine(cfg)
    omega = omega_from_affine(cfg, cox)
    return build_block_algebra(cox, omega, {s: q for s in cox.labels})


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    F = CyclotomicField(6)
    z = F.zeta(1)
    assert F.mul(F.mul(z, z), F.mul(z, z)) == F.mul(F.zeta(2), F.zeta(2))
    assert F.rational(F.mul(F.zeta(3), F.zeta(3))) == 1
    assert F.rational(F.zeta(3)) == -1
    assert F.rational(z) is None


@pytest.mark.parametrize("name,bonds", [
    ("SL2", {("s1", "s0"): 0}),
    ("A2", {("s1", "s2"): 3, ("s1", "s0"): 3, ("s2", "s0"): 3}),
    ("B2", {("s1", "s2"): 4, ("s1", "s0"): 4, ("s2", "s0"): 2}),
    ("G2", {("s1", "s2"): 6, ("s1", "s0"): 3, ("s2", "s0"): 2}),
])
def test_affine_diagrams(name, bonds):
    cox = coxeter_from_affine(AffineConfig(preset(name)))
    for (a, b), m in bonds.items():
        assert cox.m[cox.label_index[a]][cox.label_index[b]] == m
    assert sorted(cox.m[i][j] for i in range(cox.rank) for j in range(i + 1, cox.rank)) == \
        sorted(bonds.values())


def test_pgl2_omega_swaps_nodes():
    alg = _affine("PGL2")
    assert alg.omega.order == 2
    assert alg.omega.action[1] == (1, 0)


@pytest.mark.parametrize("name", ["SL2", "PGL2", "A2", "B2", "G2"])
def test_relations(name):
    alg = _affine(name)
    assert check_braid(alg).ok
    assert check_quadratic(alg).ok
    assert check_omega_automorphism(alg).ok
    assert check_associativity(alg, trials=20)


def test_normal_form_lengths():
    cox = CoxeterSystem(["a", "b"], {("a", "b"): 3})
    assert cox.length(cox.parse(["a", "b", "a"])) == 3
    assert cox.normalize(cox.parse(["b", "a", "b"])) == cox.normalize(cox.parse(["a", "b", "a"]))
    assert cox.length(cox.parse(["a", "a"])) == 0
    inf = CoxeterSystem(["a", "b"], {("a", "b"): "inf"})
    assert inf.length(inf.parse(["a", "b"] * 5)) == 10


def test_quadratic_example():
    alg = build_block_algebra(CoxeterSystem(["s"]), params={"s": 3})
    Ts = alg.T(["s"])
    assert Ts * Ts == 2 * Ts + 3


def test_unequal_q_on_braid_linked_pair_rejected():
    cox = CoxeterSystem(["a", "b"], {("a", "b"): 3})
    with pytest.raises(ValidationError):
        build_block_algebra(cox, params={"a": 2, "b": 3})
    # an even bond allows unequal parameters
    cox4 = CoxeterSystem(["a", "b"], {("a", "b"): 4})
    build_block_algebra(cox4, params={"a": 2, "b": 3})


def test_rejects_non_crystallographic():
    with pytest.raises(ValidationError):
        CoxeterSystem(["a", "b"], {("a", "b"): 5})


def test_q_from_induction():
    assert q_from_induction(6, 2) == 3
    assert q_from_induction(2, 6) == 3
    assert q_from_induction(5) == 1
    with pytest.raises(ValidationError):
        q_from_induction(0)


def test_cocycle_validation():
    V4 = OmegaGroup.product(OmegaGroup.cyclic(2, [0, 1]), OmegaGroup.cyclic(2, [0, 1]))
    klein_cocycle(V4).check(V4)
    bad = Cocycle(2, ((0, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)))
    with pytest.raises(ValidationError):
        bad.check(V4)


def _klein_pair():
    cox = CoxeterSystem(["a", "b"], {("a", "b"): "inf"})
    V4 = OmegaGroup.product(OmegaGroup.cyclic(2, [1, 0]), OmegaGroup.cyclic(2, [0, 1]))
    mu = klein_cocycle(V4)
    return cox, V4, mu


def test_match_cohomologous_cocycles():
    cox, V4, mu = _klein_pair()
    A = build_block_algebra(cox, V4, {"a": 3, "b": 3}, mu)
    B = build_block_algebra(cox, V4, {"a": 3, "b": 3}, mu.times_coboundary(V4, [0, 1, 0, 0]))
    res = match_presentations(A, B)
    assert res.ok and res.homomorphism and res.anti_involution


def test_match_detects_cocycle_class():
    cox, V4, mu = _klein_pair()
    A = build_block_algebra(cox, V4, {"a": 3, "b": 3}, mu)
    B = build_block_algebra(cox, V4, {"a": 3, "b": 3})
    res = match_presentations(A, B)
    assert not res.ok and "cocycle class mismatch" in res.obstruction


def test_match_detects_q():
    A = _affine("SL2", 3)
    B = _affine("SL2", 2)
    res = match_presentations(A, B)
    assert not res.ok and res.obstruction.startswith("q mismatch at node")


def test_match_detects_braid():
    A = build_block_algebra(CoxeterSystem(["a", "b"], {("a", "b"): 3}), params={"a": 2, "b": 2})
    B = build_block_algebra(CoxeterSystem(["a", "b"], {("a", "b"): 4}), params={"a": 2, "b": 2})
    assert "braid mismatch" in match_presentations(A, B).obstruction


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["SL2", "PGL2", "A2", "B2"]),
       st.permutations(["x", "y", "z"]))
def test_match_reflexive_symmetric_and_relabel_invariant(name, names):
    A = _affine(name)
    ren = dict(zip(A.coxeter.labels, names))
    B = relabel_algebra(A, ren)
    assert match_presentations(A, A).ok
    r1, r2 = match_presentations(A, B), match_presentations(B, A)
    assert r1.ok and r2.ok


def test_finite_oracle_agrees_with_presentation():
    # Borel of SL2(F_3) against the rank-one Hecke algebra with q = 3
    G = build_group(TruncRing("zmod", 3, 1))
    table = hecke_structure_constants(G, iwahori_subgroup(G))
    alg = build_block_algebra(CoxeterSystem(["s"]), params={"s": 3})
    basis = [[] if sz == 6 else ["s"] for sz in table.cosets.sizes]
    assert compare_with_finite_oracle(alg, table.constants, basis).ok
    wrong = build_block_algebra(CoxeterSystem(["s"]), params={"s": 2})
    assert not compare_with_finite_oracle(wrong, table.constants, basis).ok
    with pytest.raises(ValidationError):
        compare_with_finite_oracle(alg, table.constants, [[]])


def test_json_configuration():
    alg = algebra_from_json({"coxeter": {"affine": "PGL2"}, "omega": "affine", "q": "3"})
    assert alg.omega.order == 2
    alg2 = algebra_from_json({"coxeter": {"labels": ["s"], "bonds": []}, "q": {"s": "5"}})
    assert alg2.params["s"] == Fraction(5)
    with pytest.raises(ValidationError):
        algebra_from_json({"coxeter": {"labels": ["s"]}})
