"""Extended affine Weyl groups, Frobenius actions and Cartan enumeration.

An :class:`AffineConfig` is built from the root datum of the torus over the
maximal unramified extension, so inertia acts trivially and the translation
lattice is ``X_*`` itself.  An element ``t_lam w`` acts on the apartment
``X_* (x) R`` by ``v -> lam + w v``; it lies in the affine Weyl group when
``lam`` is in the coroot lattice, and its class in ``X_* / Q^vee`` is its
component in the length-zero subgroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import intlinalg as la
from .errors import ResourceLimitError, ValidationError
from .rootdata import (
    FGAbelianGroup, GaloisAction, RootDatum, _dot, _mat, coinvariants, coroot_lattice,
    dual_action, fixed_subgroup, induced_endomorphism, is_elliptic, matrix_order,
    quotient_lattice, weyl_group,
)

ORBIT_CAP = 10**5


class AffineConfig:
    """Combinatorial model of ``W~ = X_* x| W`` for one root datum."""

    def __init__(self, rd: RootDatum):
        self.rd = rd
        self.rank = rd.rank
        self.weyl = weyl_group(rd)
        self.weyl_index = {w: i for i, w in enumerate(self.weyl)}
        self.identity_index = self.weyl_index[_mat(la.identity(self.rank))]
        self.weyl_inverse = [self.weyl_index[_mat(la.integer_inverse([list(r) for r in w]))]
                             for w in self.weyl]
        self.positive_roots = rd.positive_roots()
        self.coroot_basis = coroot_lattice(rd)
        v = rd.regular_cocharacter()
        top = max((_dot(a, v) for a in self.positive_roots), default=0)
        # a point of the base alcove that lies on no affine root hyperplane
        self.alcove_point = tuple(Fraction(x, top + 1) for x in v)
        self.omega = omega_group(rd, GaloisAction.trivial(self.rank))

    def element(self, translation, finite: int | None = None) -> AffineElement:
        translation = tuple(int(x) for x in translation)
        if len(translation) != self.rank:
            raise ValidationError("translation has the wrong length")
        finite = self.identity_index if finite is None else int(finite)
        if not 0 <= finite < len(self.weyl):
            raise ValidationError("finite part is not a Weyl group index")
        return AffineElement(translation, finite, self)

    def identity(self) -> AffineElement:
        return self.element([0] * self.rank)

    def weyl_element(self, matrix) -> AffineElement:
        return self.element([0] * self.rank, self.weyl_index[_mat(matrix)])

    def simple_reflections(self) -> list[AffineElement]:
        """Finite simple reflections followed by the affine one(s) ``t_{a^vee} s_a``
        for each highest root ``a`` of an irreducible factor."""
        from .rootdata import reflection_matrix
        out = [self.weyl_element(reflection_matrix(a, self.rd.coroot_of(a)))
               for a in self.rd.simple_roots()]
        for a in self._highest_roots():
            c = self.rd.coroot_of(a)
            s = self.weyl_index[reflection_matrix(a, c)]
            out.append(self.element(c, s))
        return out

    def _highest_roots(self):
        pos = self.positive_roots
        simple = self.rd.simple_roots()
        highest = []
        for a in pos:
            if all(tuple(x + y for x, y in zip(a, b)) not in pos for b in simple):
                highest.append(a)
        return highest

    def in_coroot_lattice(self, lam) -> bool:
        return la.solve_in_basis(self.coroot_basis, list(lam)) is not None

    def multiply(self, a: AffineElement, b: AffineElement) -> AffineElement:
        for x in (a, b):
            if x.cfg is not self:
                raise ValidationError("elements come from different configurations")
        w = self.weyl[a.finite]
        lam = tuple(x + y for x, y in zip(a.translation, la.matvec(w, b.translation)))
        prod = _mat(la.matmul(w, self.weyl[b.finite]))
        return AffineElement(lam, self.weyl_index[prod], self)

    def inverse(self, a: AffineElement) -> AffineElement:
        winv = self.weyl_inverse[a.finite]
        lam = tuple(-x for x in la.matvec(self.weyl[winv], a.translation))
        return AffineElement(lam, winv, self)

    def length(self, a: AffineElement) -> int:
        """Number of affine root hyperplanes between the base alcove and its image."""
        w = self.weyl[a.finite]
        image = [a.translation[i] + sum(w[i][j] * self.alcove_point[j] for j in range(self.rank))
                 for i in range(self.rank)]
        total = 0
        for alpha in self.positive_roots:
            total += abs(math.floor(sum(x * y for x, y in zip(alpha, image))))
        return total

    def omega_part(self, a: AffineElement):
        return self.omega.project(a.translation)


@dataclass(frozen=True)
class AffineElement:
    """``t_translation * weyl[finite]`` inside a fixed configuration."""

    translation: tuple[int, ...]
    finite: int
    cfg: AffineConfig = field(compare=False, repr=False, hash=False)

    def __mul__(self, other: AffineElement) -> AffineElement:
        return self.cfg.multiply(self, other)

    @property
    def omega_part(self):
        return self.cfg.omega_part(self)

    def in_waff(self) -> bool:
        return self.cfg.in_coroot_lattice(self.translation)


def multiply(a: AffineElement, b: AffineElement) -> AffineElement:
    if a.cfg is not b.cfg:
        raise ValidationError("elements come from different configurations")
    return a.cfg.multiply(a, b)


def im_length(cfg: AffineConfig, a: AffineElement) -> int:
    return cfg.length(a)


class SigmaAction:
    """Frobenius on ``W~`` induced by a lattice automorphism of ``X_*``.

    ``sigma(t_lam w) = t_{sigma lam} (sigma w sigma^-1)``; the actions on
    the Weyl group and on ``Omega`` are derived from the matrix.
    """

    def __init__(self, cfg: AffineConfig, matrix):
        self.cfg = cfg
        self.matrix = _mat(matrix)
        n = cfg.rank
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ValidationError("sigma must be a square matrix of the lattice rank")
        try:
            self.inverse_matrix = _mat(la.integer_inverse([list(r) for r in self.matrix]))
        except ValueError as exc:
            raise ValidationError("sigma is not invertible over Z") from exc
        GaloisAction((), self.matrix).check_against(cfg.rd)
        dual = dual_action(self.matrix)
        roots = set(cfg.rd.roots)
        self._on_roots = {}
        for a in cfg.rd.roots:
            img = tuple(int(sum(dual[i][j] * a[j] for j in range(n))) for i in range(n))
            if img not in roots:
                raise ValidationError("sigma does not permute the roots")
            self._on_roots[a] = img
        self.order = matrix_order(self.matrix)
        self.on_weyl = tuple(
            cfg.weyl_index[_mat(la.matmul(la.matmul(self.matrix, w), self.inverse_matrix))]
            for w in cfg.weyl)
        self.on_omega = induced_endomorphism(cfg.omega, self.matrix)

    def __call__(self, a: AffineElement) -> AffineElement:
        lam = tuple(la.matvec(self.matrix, a.translation))
        return AffineElement(lam, self.on_weyl[a.finite], self.cfg)

    def galois_action(self) -> GaloisAction:
        return GaloisAction((), self.matrix)

    def stable_positive_system(self):
        """A Weyl group element ``w`` with ``w(Phi+)`` sigma-stable, or ``None``."""
        pos = self.cfg.positive_roots
        n = self.cfg.rank
        for i, w in enumerate(self.cfg.weyl):
            dual = dual_action(w)
            chamber = {tuple(int(sum(dual[r][c] * a[c] for c in range(n))) for r in range(n))
                       for a in pos}
            if {self._on_roots[a] for a in chamber} == chamber:
                return i
        return None


@dataclass
class SigmaFixedReport:
    radius: int
    elements: list[AffineElement]
    elliptic: bool
    stable_positive_system: bool
    warnings: list[str]

    @property
    def hypotheses_hold(self) -> bool:
        return self.elliptic and self.stable_positive_system

    @property
    def only_identity(self) -> bool:
        return len(self.elements) == 1 and self.elements[0] == self.elements[0].cfg.identity()


def coroot_ball(cfg: AffineConfig, radius: int):
    """Coroot lattice points whose HNF-basis coordinates lie in ``[-radius, radius]``."""
    basis = cfg.coroot_basis
    out = []
    for coords in _box(len(basis), radius):
        out.append(tuple(sum(c * b[i] for c, b in zip(coords, basis)) for i in range(cfg.rank)))
    return out


def _box(k: int, radius: int):
    pts = [()]
    for _ in range(k):
        pts = [p + (x,) for p in pts for x in range(-radius, radius + 1)]
    return pts


def sigma_fixed_waff(cfg: AffineConfig, sigma: SigmaAction, radius: int) -> SigmaFixedReport:
    """Sigma-fixed elements of ``W_aff`` with translation in the coroot ball."""
    if radius < 1:
        raise ValidationError("radius must be >= 1")
    fixed = []
    fixed_weyl = [i for i in range(len(cfg.weyl)) if sigma.on_weyl[i] == i]
    for lam in coroot_ball(cfg, radius):
        if tuple(la.matvec(sigma.matrix, lam)) != lam:
            continue
        for i in fixed_weyl:
            fixed.append(AffineElement(lam, i, cfg))
    fixed.sort(key=lambda a: (cfg.length(a), a.translation, a.finite))
    elliptic = is_elliptic(cfg.rd, sigma.galois_action())
    stable = sigma.stable_positive_system() is not None
    warnings = []
    if not elliptic:
        warnings.append("torus is not elliptic")
    if not stable:
        warnings.append("no sigma-stable positive system")
    return SigmaFixedReport(radius, fixed, elliptic, stable, warnings)


def omega_group(rd: RootDatum, act: GaloisAction) -> FGAbelianGroup:
    """Inertia coinvariants of ``X_*`` modulo the image of the coroot lattice."""
    n = rd.rank
    cols = [list(c) for c in rd.coroots]
    for g in act.inertia_gens:
        d = la.sub_identity([list(r) for r in g])
        cols += [[d[i][j] for i in range(n)] for j in range(n)]
    if not cols:
        return quotient_lattice(n, la.zeros(n, 0))
    R = [[cols[c][i] for c in range(len(cols))] for i in range(n)]
    return quotient_lattice(n, R)


@dataclass(frozen=True)
class CartanOrbit:
    representative: tuple[int, ...]
    size: int          # points of the orbit inside the ball
    orbit_size: int    # full orbit size


def _close_group(gens, k: int, cap: int = ORBIT_CAP):
    ident = _mat(la.identity(k))
    seen = {ident}
    frontier = [ident]
    gens = [_mat(g) for g in gens]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = _mat(la.matmul(h, g))
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
                    if len(seen) > cap:
                        raise ResourceLimitError("acting group is not finite below the cap")
        frontier = nxt
    return sorted(seen)


def cartan_orbits(fixed: FGAbelianGroup, wgroup, radius: int) -> list[CartanOrbit]:
    """Orbit representatives of a finite group acting on ``fixed``, restricted to a ball.

    The representative of each orbit is the lexicographically least point of
    the orbit inside the ball.
    """
    if radius < 1:
        raise ValidationError("radius must be >= 1")
    k = fixed.ngens
    mats = [_mat(g) for g in wgroup]
    for g in mats:
        if len(g) != k or any(len(r) != k for r in g):
            raise ValidationError("automorphism has the wrong size")
        if not fixed.preserves_relations(g):
            raise ValidationError("automorphism does not descend to the group")
    group = _close_group(mats, k) if k else [()]
    ball = sorted(fixed.elements(radius))
    in_ball = set(ball)
    assigned = set()
    out = []
    for x in ball:
        if x in assigned:
            continue
        orbit = {fixed.reduce(la.matvec(g, x)) for g in group} if k else {x}
        inside = orbit & in_ball
        assigned |= inside
        out.append(CartanOrbit(x, len(inside), len(orbit)))
    return out


@dataclass
class CartanReport:
    fixed_group: FGAbelianGroup
    orbits: list[CartanOrbit]
    weyl_fixed: int
    split_orbits: list[CartanOrbit]


def cartan_decomposition(rd: RootDatum, act: GaloisAction, radius: int) -> CartanReport:
    """Weyl orbits on the sigma-fixed inertia coinvariants, next to the split count.

    The acting group is the set of Weyl elements commuting with Frobenius and
    inertia.  ``split_orbits`` is the classical count of ``W``-orbits on
    ``X_*`` in the same ball, reported for comparison.
    """
    act.check_against(rd)
    n = rd.rank
    A = coinvariants(n, act.inertia_gens)
    sigma = induced_endomorphism(A, act.frobenius)
    F = fixed_subgroup(A, sigma)
    W = weyl_group(rd)
    commuting = []
    for w in W:
        if all(_mat(la.matmul(w, g)) == _mat(la.matmul(g, w))
               for g in act.inertia_gens + (act.frobenius,)):
            commuting.append(w)
    wA = [induced_endomorphism(A, w) for w in commuting]
    wF = [induced_endomorphism(F, w) for w in wA] if F.ngens else []
    orbits = cartan_orbits(F, wF, radius)
    split = cartan_orbits(coinvariants(n, []), W, radius)
    return CartanReport(F, orbits, len(commuting), split)
