"""Root data with Galois actions, lattice coinvariants and fixed points.

Everything acts on the cocharacter lattice ``X_* = Z^rank``.  Roots live in
the character lattice and pair with cocharacters by the dot product.  The
Galois action is given by explicit integer matrices for inertia generators
and for Frobenius.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import intlinalg as la
from .errors import ResourceLimitError, ValidationError

WEYL_CAP = 10**7

Vector = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _mat(M) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in M)


def reflection_matrix(root: Sequence[int], coroot: Sequence[int]) -> IntMatrix:
    """``x -> x - <root, x> coroot`` on the cocharacter lattice."""
    n = len(coroot)
    return tuple(tuple(int(i == j) - coroot[i] * root[j] for j in range(n)) for i in range(n))


def dual_action(M) -> list[list[Fraction]]:
    """Contragredient ``(M^-1)^T``: the action on characters."""
    return la.transpose(la.rational_inverse([list(r) for r in M]))


def act_on_character(M, chi) -> Vector:
    D = dual_action(M)
    out = [sum(D[i][j] * chi[j] for j in range(len(chi))) for i in range(len(D))]
    if any(x.denominator != 1 for x in out):
        raise ValidationError("matrix is not invertible over Z")
    return tuple(int(x) for x in out)


@dataclass(frozen=True)
class RootDatum:
    """Roots and coroots (same index order) on lattices of rank ``rank``."""

    rank: int
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        roots = tuple(tuple(int(x) for x in r) for r in self.roots)
        coroots = tuple(tuple(int(x) for x in c) for c in self.coroots)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "coroots", coroots)
        if self.rank < 1:
            raise ValidationError("rank must be positive")
        if len(roots) != len(coroots):
            raise ValidationError("roots and coroots must be paired")
        if any(len(v) != self.rank for v in roots + coroots):
            raise ValidationError("vector length differs from rank")
        if len(set(roots)) != len(roots):
            raise ValidationError("repeated root")
        for a, c in zip(roots, coroots):
            if _dot(a, c) != 2:
                raise ValidationError(f"<{a}, {c}> != 2")
        pairs = set(zip(roots, coroots))
        for a, c in pairs:
            s = reflection_matrix(a, c)
            for b, d in pairs:
                img = (act_on_character(s, b), tuple(la.matvec(s, d)))
                if img not in pairs:
                    raise ValidationError("root set not stable under its reflections")

    @classmethod
    def from_simple(cls, rank: int, simple_roots, simple_coroots, name: str = "") -> RootDatum:
        """Close a simple system under the reflections it generates."""
        simple = [(tuple(a), tuple(c)) for a, c in zip(simple_roots, simple_coroots)]
        refl = [reflection_matrix(a, c) for a, c in simple]
        seen = {}
        queue = deque()
        for pair in simple:
            for sign in (1, -1):
                p = (tuple(sign * x for x in pair[0]), tuple(sign * x for x in pair[1]))
                if p not in seen:
                    seen[p] = None
                    queue.append(p)
        while queue:
            a, c = queue.popleft()
            for s in refl:
                p = (act_on_character(s, a), tuple(la.matvec(s, c)))
                if p not in seen:
                    seen[p] = None
                    queue.append(p)
                    if len(seen) > 10**5:
                        raise ResourceLimitError("root system does not close up")
        ordered = sorted(seen)
        return cls(rank, tuple(a for a, _ in ordered), tuple(c for _, c in ordered), name)

    @classmethod
    def torus(cls, rank: int, name: str = "torus") -> RootDatum:
        return cls(rank, (), (), name)

    def pairs(self):
        return list(zip(self.roots, self.coroots))

    def coroot_of(self, root) -> Vector:
        return self.coroots[self.roots.index(tuple(root))]

    # -- positivity ------------------------------------------------------

    def regular_cocharacter(self) -> Vector:
        """A vector pairing nonzero with every root (deterministic search)."""
        if not self.roots:
            return tuple([0] * self.rank)
        base = 1
        while True:
            v = tuple(base ** (self.rank - 1 - i) for i in range(self.rank))
            if all(_dot(a, v) for a in self.roots):
                return v
            base += 1

    def positive_roots(self, v: Sequence[int] | None = None) -> tuple[Vector, ...]:
        v = v if v is not None else self.regular_cocharacter()
        return tuple(a for a in self.roots if _dot(a, v) > 0)

    def simple_roots(self, v: Sequence[int] | None = None) -> tuple[Vector, ...]:
        pos = self.positive_roots(v)
        sums = {tuple(x + y for x, y in zip(a, b)) for a in pos for b in pos}
        return tuple(a for a in pos if a not in sums)

    def to_json(self) -> dict:
        return {"rank": self.rank, "roots": [list(r) for r in self.roots],
                "coroots": [list(c) for c in self.coroots]}

    @classmethod
    def from_json(cls, data) -> RootDatum:
        if isinstance(data, str):
            return preset(data)
        if "preset" in data:
            return preset(data["preset"])
        try:
            return cls(int(data["rank"]), tuple(map(tuple, data["roots"])),
                       tuple(map(tuple, data["coroots"])), data.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed root datum: {exc}") from exc


# Cartan matrices with entry (i, j) = <alpha_i^vee, alpha_j>.
_CARTAN = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "G2": [[2, -3], [-1, 2]],
}


def adjoint_datum(cartan, name: str = "") -> RootDatum:
    """Adjoint form: characters are the root lattice, simple roots its basis."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # <alpha_j, alpha_i^vee> = cartan[i][j], so alpha_i^vee is row i
    coroots = [tuple(cartan[i]) for i in range(n)]
    return RootDatum.from_simple(n, simple, coroots, name)


def preset(name: str) -> RootDatum:
    """Named root data: A1, A2, B2, G2 (adjoint), SL2, PGL2, GL2, SL3, T1, T2."""
    key = name.upper()
    if key in _CARTAN:
        return adjoint_datum(_CARTAN[key], key)
    if key == "SL2":
        return RootDatum(1, ((2,), (-2,)), ((1,), (-1,)), "SL2")
    if key == "PGL2":
        return RootDatum(1, ((1,), (-1,)), ((2,), (-2,)), "PGL2")
    if key == "GL2":
        return RootDatum(2, ((1, -1), (-1, 1)), ((1, -1), (-1, 1)), "GL2")
    if key == "SL3":
        cart = _CARTAN["A2"]
        # simply connected: cocharacters are the coroot lattice
        roots = [tuple(cart[j][i] for j in range(2)) for i in range(2)]
        return RootDatum.from_simple(2, roots, [(1, 0), (0, 1)], "SL3")
    if key in ("T1", "T2"):
        return RootDatum.torus(int(key[1]), key)
    raise ValidationError(f"unknown root datum preset {name!r}")


PRESETS = ("A1", "A2", "B2", "G2", "SL2", "PGL2", "GL2", "SL3", "T1", "T2")


@dataclass(frozen=True)
class GaloisAction:
    """Inertia generators and Frobenius, as matrices on cocharacters."""

    inertia_gens: tuple[IntMatrix, ...]
    frobenius: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "inertia_gens", tuple(_mat(g) for g in self.inertia_gens))
        object.__setattr__(self, "frobenius", _mat(self.frobenius))
        n = len(self.frobenius)
        for g in self.inertia_gens + (self.frobenius,):
            if len(g) != n or any(len(r) != n for r in g):
                raise ValidationError("action matrices must be square of one size")
            try:
                la.integer_inverse([list(r) for r in g])
            except ValueError as exc:
                raise ValidationError("action matrix not invertible over Z") from exc
            matrix_order(g)

    @classmethod
    def trivial(cls, rank: int) -> GaloisAction:
        return cls((), _mat(la.identity(rank)))

    def check_against(self, rd: RootDatum) -> None:
        cor = set(rd.coroots)
        for g in self.inertia_gens + (self.frobenius,):
            if {tuple(la.matvec(g, c)) for c in cor} != cor:
                raise ValidationError("Galois action does not permute the coroots")

    def to_json(self) -> dict:
        return {"inertia": [[list(r) for r in g] for g in self.inertia_gens],
                "frobenius": [list(r) for r in self.frobenius]}

    @classmethod
    def from_json(cls, data: dict, rank: int) -> GaloisAction:
        frob = data.get("frobenius", la.identity(rank))
        return cls(tuple(data.get("inertia", [])), frob)


def matrix_order(M, cap: int = 10**4) -> int:
    n = len(M)
    ident = _mat(la.identity(n))
    P = _mat(M)
    k = 1
    while P != ident:
        P = _mat(la.matmul(P, M))
        k += 1
        if k > cap:
            raise ValidationError("matrix does not have finite order")
    return k


# ---------------------------------------------------------------------------
# Weyl groups


def weyl_group(rd: RootDatum, cap: int = WEYL_CAP) -> list[IntMatrix]:
    """All Weyl group elements as matrices on cocharacters.

    Ordered by word length in the simple reflections, ties broken by the
    flattened matrix entries.
    """
    n = rd.rank
    ident = _mat(la.identity(n))
    gens = [reflection_matrix(a, rd.coroot_of(a)) for a in rd.simple_roots()]
    length = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                sw = _mat(la.matmul(s, w))
                if sw not in length:
                    length[sw] = length[w] + 1
                    nxt.append(sw)
                    if len(length) > cap:
                        raise ResourceLimitError("not a finite Weyl group (closure exceeded cap)")
        frontier = nxt
    return sorted(length, key=lambda w: (length[w], [x for row in w for x in row]))


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


@dataclass(frozen=True)
class FGAbelianGroup:
    """``Z/d_1 x ... x Z/d_t x Z^free_rank`` in Smith normal form.

    Canonical coordinates put the torsion factors first.  ``basis_map``
    sends ambient coordinates to canonical ones; ``section`` lifts canonical
    generators back.  Only ``free_rank`` and ``torsion`` take part in
    equality.
    """

    free_rank: int
    torsion: tuple[int, ...]
    basis_map: tuple = field(default=(), compare=False, repr=False)
    section: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        tors = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", tors)
        if any(d < 2 for d in tors):
            raise ValidationError("invariant factors must be >= 2")
        if any(b % a for a, b in zip(tors, tors[1:])):
            raise ValidationError("invariant factors must divide successively")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def reduce(self, v) -> Vector:
        v = list(v)
        for i, d in enumerate(self.torsion):
            v[i] %= d
        return tuple(int(x) for x in v)

    def project(self, x) -> Vector:
        """Canonical coordinates of an ambient vector."""
        out = [sum(Fraction(c) * xi for c, xi in zip(row, x)) for row in self.basis_map]
        if any(c.denominator != 1 for c in out):
            raise ValidationError("vector does not lie in this group's ambient lattice")
        return self.reduce(int(c) for c in out)

    def lift(self, v) -> Vector:
        return tuple(sum(self.section[i][j] * v[j] for j in range(self.ngens))
                     for i in range(len(self.section)))

    def relation_lattice(self) -> list[list[int]]:
        """Columns generate the relations among canonical coordinates."""
        k = self.ngens
        cols = [[d if i == j else 0 for i in range(k)] for j, d in enumerate(self.torsion)]
        return cols

    def preserves_relations(self, M) -> bool:
        for col in self.relation_lattice():
            img = la.matvec(M, col)
            if any(x % d for x, d in zip(img, self.torsion)):
                return False
            if any(img[len(self.torsion):]):
                return False
        return True

    def elements(self, radius: int):
        """Torsion coordinates in ``[0, d)``, free ones in ``[-radius, radius]``."""
        ranges = [range(d) for d in self.torsion] + [range(-radius, radius + 1)] * self.free_rank
        return _product(ranges)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "0"


def _product(ranges):
    out = [()]
    for r in ranges:
        out = [t + (x,) for t in out for x in r]
    return out


def quotient_lattice(n: int, relation_columns) -> FGAbelianGroup:
    """``Z^n`` modulo the span of the given columns (an ``n x k`` matrix)."""
    R = [list(row) for row in relation_columns] if relation_columns and relation_columns[0] else la.zeros(n, 0)
    ncols = len(R[0]) if R and R[0] else 0
    if ncols == 0:
        U, Uinv, diag = la.identity(n), la.identity(n), [0] * n
    else:
        U, D, _, Uinv = la.smith(R, nrows=n, ncols=ncols)
        diag = la.diagonal(D) + [0] * (n - min(n, ncols))
    keep = [i for i in range(n) if diag[i] != 1]
    torsion = [diag[i] for i in keep if diag[i] != 0]
    free = [i for i in keep if diag[i] == 0]
    tors_idx = [i for i in keep if diag[i] != 0]
    order = tors_idx + free
    basis_map = tuple(tuple(U[i]) for i in order)
    section = tuple(tuple(Uinv[r][i] for i in order) for r in range(n))
    return FGAbelianGroup(len(free), tuple(torsion), basis_map, section)


def coinvariants(lattice_rank: int, action_gens) -> FGAbelianGroup:
    """``X / <(g - 1) x>`` for ``X = Z^lattice_rank``."""
    n = lattice_rank
    for g in action_gens:
        if len(g) != n or any(len(r) != n for r in g):
            raise ValidationError("action matrices must match the lattice rank")
    blocks = [la.sub_identity([list(r) for r in g]) for g in action_gens]
    R = la.hstack(blocks, n) if blocks else la.zeros(n, 0)
    return quotient_lattice(n, R)


def image_rank(lattice_rank: int, action_gens) -> int:
    """Rank of the span of all ``(g - 1)`` images."""
    blocks = [la.sub_identity([list(r) for r in g]) for g in action_gens]
    if not blocks:
        return 0
    return la.rank(la.hstack(blocks, lattice_rank), ncols=lattice_rank * len(blocks))


def induced_endomorphism(A: FGAbelianGroup, M) -> IntMatrix:
    """Matrix, in ``A``'s canonical coordinates, of an ambient endomorphism ``M``."""
    k = A.ngens
    cols = []
    for j in range(k):
        e = [int(i == j) for i in range(k)]
        cols.append(A.project(la.matvec(M, A.lift(e))))
    out = tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))
    if not A.preserves_relations(out):
        raise ValidationError("endomorphism does not descend to the quotient")
    return out


def fixed_subgroup(A: FGAbelianGroup, sigma) -> FGAbelianGroup:
    """Kernel of ``sigma - 1`` on ``A``; ``sigma`` is in canonical coordinates.

    The result's ``section`` maps its canonical coordinates into ``A``'s,
    and its ``basis_map`` (rational) maps back.
    """
    k = A.ngens
    sigma = [list(r) for r in sigma]
    if len(sigma) != k or any(len(r) != k for r in sigma):
        raise ValidationError("sigma must be square of the group's generator count")
    if not A.preserves_relations(sigma):
        raise ValidationError("sigma does not descend to the presented group")
    if k == 0:
        return FGAbelianGroup(0, (), (), ())
    t = len(A.torsion)
    # solve (sigma - 1) x = D y with D the torsion relations
    S1 = la.sub_identity(sigma)
    Dneg = [[-(A.torsion[j]) if i == j else 0 for j in range(t)] for i in range(k)]
    big = la.hstack([S1, Dneg], k)
    ker = la.kernel(big, k + t)
    gens = [[ker[i][c] for c in range(len(ker[0]))] for i in range(k)] if ker and ker[0] else la.zeros(k, 0)
    # K' = span of the x-parts of the kernel together with the relations
    vecs = [[gens[i][c] for i in range(k)] for c in range(len(gens[0]) if gens and gens[0] else 0)]
    vecs += [[A.torsion[j] if i == j else 0 for i in range(k)] for j in range(t)]
    B = la.hnf_rows(vecs, k)  # rows form a basis of K'
    m = len(B)
    # relations of K'/L expressed in the basis B
    rel_cols = []
    for j in range(t):
        coords = la.solve_in_basis(B, [A.torsion[j] if i == j else 0 for i in range(k)])
        rel_cols.append(coords)
    R = [[rel_cols[c][i] for c in range(t)] for i in range(m)] if t else la.zeros(m, 0)
    Q = quotient_lattice(m, R)
    # compose: canonical coords of Q -> coords in basis B -> A coords
    Bt = la.transpose(B, m)  # k x m
    section = tuple(tuple(x) for x in la.matmul(Bt, [list(r) for r in Q.section])) if Q.ngens else tuple(() for _ in range(k))
    # rational back-map: A coords (on K') -> basis-B coords -> Q coords
    pinv = _left_inverse(B)  # m x k rational, pinv @ (B^T c) = c
    basis_map = tuple(tuple(sum(Fraction(Q.basis_map[i][r]) * pinv[r][c] for r in range(m))
                            for c in range(k)) for i in range(Q.ngens))
    return FGAbelianGroup(Q.free_rank, Q.torsion, basis_map, section)


def _left_inverse(B) -> list[list[Fraction]]:
    """For row-basis ``B`` (m x k, full row rank) a rational ``m x k`` map
    sending ``sum_i c_i B_i`` back to ``c``."""
    m = len(B)
    if m == 0:
        return []
    k = len(B[0])
    pivots = [next(j for j in range(k) if row[j]) for row in B]
    # B restricted to pivot columns is upper triangular and invertible
    sq = [[B[i][p] for p in pivots] for i in range(m)]  # m x m, rows i
    inv = la.rational_inverse(la.transpose(sq))  # solves sq^T c = x_pivots
    out = [[Fraction(0)] * k for _ in range(m)]
    for i in range(m):
        for jj, p in enumerate(pivots):
            out[i][p] = inv[i][jj]
    return out


# ---------------------------------------------------------------------------
# Ellipticity


def central_quotient(rd: RootDatum):
    """Map ``X_* -> X_* / Z`` with ``Z`` the radical of the root pairing.

    Returns ``(q, lift, r)``: ``q`` is ``r x n`` surjective with kernel
    ``Z``, ``lift`` is ``n x r`` with ``q @ lift = 1``.
    """
    n = rd.rank
    if not rd.roots:
        return [], [[] for _ in range(n)], 0
    Rt = [list(a) for a in rd.roots]
    _, D, V, _ = la.smith(Rt, ncols=n)
    r = sum(1 for d in la.diagonal(D) if d)
    Vinv = la.integer_inverse(V)
    q = Vinv[:r]
    lift = [row[:r] for row in V]
    return q, lift, r


def _restrict(M, q, lift):
    return la.matmul(la.matmul(q, [list(row) for row in M]), lift)


def elliptic_data(rd: RootDatum, act: GaloisAction):
    """The fixed subgroup whose finiteness decides ellipticity."""
    act.check_against(rd)
    q, lift, r = central_quotient(rd)
    if r == 0:
        return FGAbelianGroup(0, ())
    inertia = [_restrict(g, q, lift) for g in act.inertia_gens]
    A = coinvariants(r, inertia)
    sigma = induced_endomorphism(A, _restrict(act.frobenius, q, lift))
    return fixed_subgroup(A, sigma)


def is_elliptic(rd: RootDatum, act: GaloisAction) -> bool:
    """Ellipticity modulo the centre: the sigma-fixed inertia coinvariants
    of ``X_* / Z`` are finite.  A datum without roots is all centre, hence
    elliptic."""
    return elliptic_data(rd, act).free_rank == 0


def coroot_lattice(rd: RootDatum) -> list[list[int]]:
    """Hermite normal form basis (rows) of the span of the coroots."""
    return la.hnf_rows([list(c) for c in rd.coroots], rd.rank)


def lattice_index(basis_rows, n: int) -> int | None:
    """Index of a full-rank sublattice in ``Z^n``; ``None`` if not full rank."""
    if len(basis_rows) != n:
        return None
    _, D, _, _ = la.smith(basis_rows, ncols=n)
    out = 1
    for d in la.diagonal(D):
        out *= d
    return out
