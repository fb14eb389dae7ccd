import itertools

import pytest

from depthcalc.affine import omega_group
from depthcalc.errors import ValidationError
from depthcalc.rootdata import (
    GaloisAction, coinvariants, coroot_lattice, fixed_subgroup, image_rank,
    induced_endomorphism, is_elliptic, lattice_index, preset, weyl_group,
)


@pytest.mark.parametrize("name,order", [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12),
                                        ("SL3", 6), ("GL2", 2), ("T2", 1)])
def test_weyl_orders(name, order):
    assert len(weyl_group(preset(name))) == order


def test_swap_coinvariants():
    A = coinvariants(2, [[[0, 1], [1, 0]]])
    assert (A.free_rank, A.torsion) == (1, ())
    assert image_rank(2, [[[0, 1], [1, 0]]]) == 1


def test_minus_one_coinvariants_have_torsion():
    A = coinvariants(1, [[[-1]]])
    assert (A.free_rank, A.torsion) == (0, (2,))
    assert A.describe() == "Z/2"


def test_coroot_index():
    assert lattice_index(coroot_lattice(preset("A2")), 2) == 3
    assert lattice_index(coroot_lattice(preset("SL3")), 2) == 1
    assert lattice_index(coroot_lattice(preset("GL2")), 2) is None


@pytest.mark.parametrize("name,free,torsion", [("SL2", 0, ()), ("GL2", 1, ()), ("PGL2", 0, (2,)),
                                               ("A2", 0, (3,)), ("G2", 0, ())])
def test_omega(name, free, torsion):
    rd = preset(name)
    W = omega_group(rd, GaloisAction.trivial(rd.rank))
    assert (W.free_rank, W.torsion) == (free, torsion)


def test_fixed_subgroup():
    A = coinvariants(2, [])
    swap = induced_endomorphism(A, [[0, 1], [1, 0]])
    F = fixed_subgroup(A, swap)
    assert F.free_rank == 1
    neg = induced_endomorphism(A, [[-1, 0], [0, -1]])
    assert fixed_subgroup(A, neg).is_trivial()


def test_fixed_subgroup_of_torsion():
    A = coinvariants(1, [[[-1]]])  # Z/2
    F = fixed_subgroup(A, induced_endomorphism(A, [[-1]]))
    assert (F.free_rank, F.torsion) == (0, (2,))


def test_ellipticity():
    assert is_elliptic(preset("SL2"), GaloisAction((), [[-1]]))
    assert not is_elliptic(preset("SL2"), GaloisAction.trivial(1))
    # GL2 with trivial action is elliptic only modulo the centre if the
    # derived part is anisotropic, which it is not
    assert not is_elliptic(preset("GL2"), GaloisAction.trivial(2))
    assert is_elliptic(preset("T2"), GaloisAction.trivial(2))


def test_action_validation():
    with pytest.raises(ValidationError):
        GaloisAction((), [[2]])
    with pytest.raises(ValidationError):
        GaloisAction((), [[1, 1], [0, 1]])  # infinite order
    with pytest.raises(ValidationError):
        GaloisAction((), [[1, 0], [0, -1]]).check_against(preset("GL2"))
    with pytest.raises(ValidationError):
        preset("E8")


def test_weyl_elements_preserve_coroots():
    for name in ("A2", "B2", "G2"):
        rd = preset(name)
        cor = set(rd.coroots)
        for w in weyl_group(rd):
            act = GaloisAction((), w)
            act.check_against(rd)
            assert len(cor) == len(rd.coroots)


def test_coinvariant_order_brute_force():
    # order of Z^2 / <(g-1)x> for g of order 3 equals |det(g - 1)| = 3
    A = coinvariants(2, [[[0, -1], [1, -1]]])
    assert A.order == 3
    for M in itertools.product([-1, 0, 1], repeat=4):
        g = [[M[0], M[1]], [M[2], M[3]]]
        det = (g[0][0] - 1) * (g[1][1] - 1) - g[0][1] * g[1][0]
        if det and abs(g[0][0] * g[1][1] - g[0][1] * g[1][0]) == 1:
            B = coinvariants(2, [g])
            assert B.order == abs(det)
