"""Brute-force finite models: 2x2 matrix groups over truncated valuation rings.

These are the desk-scale stand-ins for ``K / K_l``: the ring is either
``Z / p^l`` or ``F_p[t] / t^l``, encoded as integers ``0 .. p^l - 1``.  In
the polynomial case the base-``p`` digits are the coefficients of
``1, t, t^2, ...``, so reduction modulo the ``m``-th power of the
uniformizer is ``x % p^m`` in both encodings.

Hecke algebras use the indicator functions of ``K``-double cosets, with
Haar measure normalised by ``vol(reference) = 1`` (the reference subgroup
defaults to ``K`` itself).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ResourceLimitError, ValidationError
from .ramification import is_prime

RING_CAP = 27
ORDER_CAP = 200_000

Subgroup = frozenset


@dataclass(frozen=True)
class TruncRing:
    kind: str  # "zmod" or "fpt"
    p: int
    ell: int
    add: tuple = field(init=False, repr=False, compare=False)
    mul: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("zmod", "fpt"):
            raise ValidationError(f"unknown ring kind {self.kind!r}")
        if not is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")
        if self.ell < 1:
            raise ValidationError("truncation level must be >= 1")
        n = self.size
        if self.kind == "zmod":
            add = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
            mul = tuple(tuple((a * b) % n for b in range(n)) for a in range(n))
        else:
            digits = [self._digits(a) for a in range(n)]
            add = tuple(tuple(self._undigits([(x + y) % self.p for x, y in zip(digits[a], digits[b])])
                              for b in range(n)) for a in range(n))
            mul = tuple(tuple(self._poly_mul(digits[a], digits[b]) for b in range(n))
                        for a in range(n))
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "mul", mul)

    @property
    def size(self) -> int:
        return self.p ** self.ell

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.ell):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        return sum(d * self.p ** i for i, d in enumerate(ds))

    def _poly_mul(self, x, y) -> int:
        out = [0] * self.ell
        for i, a in enumerate(x):
            if a:
                for j in range(self.ell - i):
                    out[i + j] = (out[i + j] + a * y[j]) % self.p
        return self._undigits(out)

    def neg(self, a: int) -> int:
        return next(b for b in range(self.size) if self.add[a][b] == 0)

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg(b)]

    def valuation(self, a: int) -> int:
        """Largest ``k <= ell`` with ``a`` in the ``k``-th power of the maximal ideal."""
        k = 0
        while k < self.ell and a % self.p ** (k + 1) == 0:
            k += 1
        return k

    def is_unit(self, a: int) -> bool:
        return a % self.p != 0

    def inv(self, a: int) -> int:
        for b in range(self.size):
            if self.mul[a][b] == 1:
                return b
        raise ValidationError(f"{a} is not a unit")

    def reduce(self, a: int, m: int) -> int:
        return a % self.p ** m

    def label(self) -> str:
        if self.kind == "zmod":
            return f"Z/{self.p}^{self.ell}"
        return f"F_{self.p}[t]/t^{self.ell}"


def ring_automorphism_frobenius(ring: TruncRing) -> list[int]:
    """Coefficientwise Frobenius ``sum a_i t^i -> sum a_i^p t^i``.

    On a ring whose coefficients lie in the prime field this is the identity
    map; it is kept for the interface and as a positive control.
    """
    if ring.kind != "fpt":
        return list(range(ring.size))
    out = []
    for a in range(ring.size):
        ds = [pow(d, ring.p, ring.p) for d in ring._digits(a)]
        out.append(ring._undigits(ds))
    return out


def ring_automorphism_substitution(ring: TruncRing, t_image: int) -> list[int]:
    """The substitution ``t -> t_image`` on ``F_p[t]/t^l``.

    ``t_image`` must have valuation exactly 1 for the map to be bijective.
    """
    if ring.kind != "fpt":
        raise ValidationError("substitutions only make sense for F_p[t]/t^l")
    if ring.ell > 1 and ring.valuation(t_image) != 1:
        raise ValidationError("image of t must be a uniformizer")
    powers = [1]
    for _ in range(1, ring.ell):
        powers.append(ring.mul[powers[-1]][t_image])
    out = []
    for a in range(ring.size):
        acc = 0
        for i, d in enumerate(ring._digits(a)):
            term = ring.mul[d][powers[i]] if d else 0
            acc = ring.add[acc][term]
        out.append(acc)
    if len(set(out)) != ring.size:
        raise ValidationError("substitution is not bijective")
    return out


Mat = tuple[int, int, int, int]


class FiniteGroupModel:
    """All 2x2 matrices of a given type over a truncated ring.

    Elements are stored sorted, so the element index order is the canonical
    total order on ``(a, b, c, d)`` tuples.
    """

    def __init__(self, ring: TruncRing, gtype: str = "SL2", cap: int = ORDER_CAP,
                 ring_cap: int = RING_CAP):
        gtype = gtype.upper()
        if gtype not in ("SL2", "GL2"):
            raise ValidationError(f"unsupported group type {gtype!r}")
        if ring.size > ring_cap:
            raise ResourceLimitError(f"ring of size {ring.size} exceeds cap {ring_cap}")
        predicted = self.predicted_order(ring.p, ring.ell, gtype)
        if predicted > cap:
            raise ResourceLimitError(f"group order {predicted} exceeds cap {cap}")
        self.ring = ring
        self.gtype = gtype
        R = ring
        n = R.size
        elems = []
        for a in range(n):
            for d in range(n):
                ad = R.mul[a][d]
                for b in range(n):
                    for c in range(n):
                        det = R.sub(ad, R.mul[b][c]) if (b and c) else ad
                        if (det == 1) if gtype == "SL2" else R.is_unit(det):
                            elems.append((a, b, c, d))
        elems.sort()
        if len(elems) != predicted:
            raise ValidationError(f"enumerated {len(elems)} elements, expected {predicted}")
        self.elements: list[Mat] = elems
        self.index = {g: i for i, g in enumerate(elems)}
        self.identity = self.index[(1, 0, 0, 1)]
        self._inv = [self.index[self._inverse(g)] for g in elems]

    @staticmethod
    def predicted_order(p: int, ell: int, gtype: str) -> int:
        if gtype == "SL2":
            return p ** (3 * (ell - 1)) * p * (p * p - 1)
        return p ** (4 * (ell - 1)) * (p * p - 1) * (p * p - p)

    def __len__(self):
        return len(self.elements)

    def _inverse(self, g: Mat) -> Mat:
        R = self.ring
        a, b, c, d = g
        det = R.sub(R.mul[a][d], R.mul[b][c])
        u = R.inv(det)
        return (R.mul[u][d], R.mul[u][R.neg(b)], R.mul[u][R.neg(c)], R.mul[u][a])

    def mat_mul(self, g: Mat, h: Mat) -> Mat:
        A, M = self.ring.add, self.ring.mul
        a, b, c, d = g
        e, f, x, y = h
        return (A[M[a][e]][M[b][x]], A[M[a][f]][M[b][y]],
                A[M[c][e]][M[d][x]], A[M[c][f]][M[d][y]])

    def mul(self, i: int, j: int) -> int:
        return self.index[self.mat_mul(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self._inv[i]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self._inv[g])

    def closure(self, gens: Sequence[int]) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def generators(self, subset: Sequence[int] | None = None) -> list[int]:
        """A small generating set of ``subset`` (the whole group by default)."""
        subset = sorted(subset) if subset is not None else range(len(self))
        gens: list[int] = []
        H = frozenset({self.identity})
        for x in subset:
            if x not in H:
                gens.append(x)
                H = self.closure(gens)
        return gens

    def is_subgroup(self, S) -> bool:
        S = set(S)
        if self.identity not in S:
            return False
        gens = self.generators(S)
        return set(self.closure(gens)) == S

    def is_normal(self, S) -> bool:
        S = set(S)
        return all(self.conj(g, s) in S for g in self.generators() for s in S)

    def reduction(self, i: int, m: int) -> Mat:
        return tuple(self.ring.reduce(x, m) for x in self.elements[i])


def build_group(ring: TruncRing, gtype: str = "SL2", cap: int = ORDER_CAP,
                ring_cap: int = RING_CAP) -> FiniteGroupModel:
    return FiniteGroupModel(ring, gtype, cap=cap, ring_cap=ring_cap)


def congruence_subgroup(G: FiniteGroupModel, m: int) -> frozenset:
    """Kernel of reduction modulo the ``m``-th power of the uniformizer."""
    if m < 0 or m > G.ring.ell:
        raise ValidationError(f"level {m} outside 0..{G.ring.ell}")
    if m == 0:
        return frozenset(range(len(G)))
    one = (1, 0, 0, 1)
    K = frozenset(i for i in range(len(G)) if G.reduction(i, m) == one)
    if not G.is_normal(K):
        raise ValidationError("congruence subgroup failed the normality check")
    return K


def iwahori_subgroup(G: FiniteGroupModel) -> frozenset:
    """Matrices whose lower-left entry lies in the maximal ideal (a Borel when l = 1)."""
    return frozenset(i for i, g in enumerate(G.elements) if g[2] % G.ring.p == 0)


@dataclass
class DoubleCosetTable:
    representatives: list[int]
    membership: list[int]
    sizes: list[int]

    def __len__(self):
        return len(self.representatives)

    def members(self, k: int) -> frozenset:
        return frozenset(i for i, c in enumerate(self.membership) if c == k)


def double_cosets(G: FiniteGroupModel, K) -> DoubleCosetTable:
    K = frozenset(K)
    if not G.is_subgroup(K):
        raise ValidationError("K is not a subgroup")
    gens = G.generators(K)
    membership = [-1] * len(G)
    reps, sizes = [], []
    for g in range(len(G)):
        if membership[g] >= 0:
            continue
        k = len(reps)
        membership[g] = k
        frontier = [g]
        size = 1
        while frontier:
            nxt = []
            for x in frontier:
                for h in gens:
                    for y in (G.mul(h, x), G.mul(x, h)):
                        if membership[y] < 0:
                            membership[y] = k
                            nxt.append(y)
                            size += 1
            frontier = nxt
        reps.append(g)
        sizes.append(size)
    return DoubleCosetTable(reps, membership, sizes)


@dataclass
class HeckeTable:
    """Structure constants ``f_i * f_j = sum_k c[i][j][k] f_k``."""

    cosets: DoubleCosetTable
    constants: list[list[list[Fraction]]]
    normalization: int  # order of the reference subgroup, vol(reference) = 1
    k_order: int

    @property
    def dim(self) -> int:
        return len(self.cosets)

    def volume(self, k: int) -> Fraction:
        return Fraction(self.cosets.sizes[k], self.normalization)

    def multiply(self, x: Sequence, y: Sequence) -> list[Fraction]:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                xy = x[i] * y[j]
                row = self.constants[i][j]
                for k in range(n):
                    if row[k]:
                        out[k] += xy * row[k]
        return out

    def q_parameters(self) -> list[Fraction]:
        """``vol(K g K)`` for each double coset, the index-type parameters."""
        return [self.volume(k) for k in range(self.dim)]

    def to_json(self) -> dict:
        return {
            "dimension": self.dim,
            "coset_sizes": self.cosets.sizes,
            "normalization": self.normalization,
            "constants": [[[str(c) for c in row] for row in plane] for plane in self.constants],
            "q_parameters": [str(q) for q in self.q_parameters()],
        }


def hecke_structure_constants(G: FiniteGroupModel, K, reference=None,
                              cosets: DoubleCosetTable | None = None) -> HeckeTable:
    K = frozenset(K)
    table = cosets or double_cosets(G, K)
    ref = len(frozenset(reference)) if reference is not None else len(K)
    n = len(table)
    counts = [[[0] * n for _ in range(n)] for _ in range(n)]
    memb = table.membership
    for k, xk in enumerate(table.representatives):
        for y in range(len(G)):
            i = memb[y]
            j = memb[G.mul(G.inv(y), xk)]
            counts[i][j][k] += 1
    consts = [[[Fraction(c, ref) for c in row] for row in plane] for plane in counts]
    return HeckeTable(table, consts, ref, len(K))


def convolve(G: FiniteGroupModel, f: dict, g: dict, normalization: int) -> dict:
    """Direct convolution of finitely supported functions on ``G``."""
    out: dict[int, Fraction] = {}
    for y, fy in f.items():
        for z, gz in g.items():
            x = G.mul(y, z)  # z = y^-1 x
            out[x] = out.get(x, Fraction(0)) + Fraction(fy) * gz / normalization
    return {x: v for x, v in out.items() if v}


def indicator(S) -> dict:
    return {x: Fraction(1) for x in S}


def iso_from_ring_map(G1: FiniteGroupModel, G2: FiniteGroupModel, ring_map: Sequence[int]) -> list[int]:
    """Entrywise application of a ring bijection, as an element bijection."""
    return [G2.index[tuple(ring_map[x] for x in g)] for g in G1.elements]


def conjugation_iso(G: FiniteGroupModel, g: int) -> list[int]:
    return [G.conj(g, x) for x in range(len(G))]


@dataclass
class TransferReport:
    ok: bool
    stage: str
    detail: str = ""
    coset_map: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "stage": self.stage, "detail": self.detail}


def transfer_check(G1: FiniteGroupModel, K1, G2: FiniteGroupModel, K2,
                   iso: Sequence[int]) -> TransferReport:
    """Check that ``iso`` is a group isomorphism matching the two Hecke algebras."""
    K1, K2 = frozenset(K1), frozenset(K2)
    if len(iso) != len(G1) or len(G1) != len(G2) or sorted(iso) != list(range(len(G2))):
        return TransferReport(False, "bijection", "map is not a bijection of the groups")
    for h in G1.generators():
        for g in range(len(G1)):
            if iso[G1.mul(g, h)] != G2.mul(iso[g], iso[h]):
                return TransferReport(
                    False, "homomorphism",
                    f"iso(g*h) != iso(g)*iso(h) at g={G1.elements[g]}, h={G1.elements[h]}")
    if frozenset(iso[k] for k in K1) != K2:
        return TransferReport(False, "subgroup", "iso does not carry K1 onto K2")
    T1 = hecke_structure_constants(G1, K1)
    T2 = hecke_structure_constants(G2, K2)
    if T1.dim != T2.dim:
        return TransferReport(False, "double-cosets", f"{T1.dim} vs {T2.dim} double cosets")
    pi = []
    for i, rep in enumerate(T1.cosets.representatives):
        j = T2.cosets.membership[iso[rep]]
        image = frozenset(iso[x] for x in T1.cosets.members(i))
        if image != T2.cosets.members(j):
            return TransferReport(False, "double-cosets", f"double coset {i} is not mapped onto one")
        pi.append(j)
    for i in range(T1.dim):
        for j in range(T1.dim):
            for k in range(T1.dim):
                a = T1.constants[i][j][k]
                b = T2.constants[pi[i]][pi[j]][pi[k]]
                if a != b:
                    return TransferReport(False, "structure-constants",
                                          f"c[{i}][{j}][{k}] = {a} but image has {b}")
    return TransferReport(True, "all", f"{T1.dim} double cosets matched", pi)


def _double_coset_expansion(G: FiniteGroupModel, Km, Kr) -> set[frozenset]:
    table = double_cosets(G, Km)
    inside = {table.membership[x] for x in Kr}
    out = set()
    for k in inside:
        members = table.members(k)
        if not members <= Kr:
            raise ValidationError("K_r is not a union of K_m double cosets")
        out.add(members)
    return out


def idempotent_transfer_check(G: FiniteGroupModel, Km, Kr, G2: FiniteGroupModel, Km2, Kr2,
                              iso: Sequence[int]) -> bool:
    """Whether ``iso`` carries the expansion of ``1_{K_r}`` onto that of ``1_{K'_r}``."""
    Km, Kr, Km2, Kr2 = map(frozenset, (Km, Kr, Km2, Kr2))
    if not (Km <= Kr and Km2 <= Kr2):
        raise ValidationError("need K_m inside K_r on both sides")
    left = _double_coset_expansion(G, Km, Kr)
    right = _double_coset_expansion(G2, Km2, Kr2)
    mapped = {frozenset(iso[x] for x in D) for D in left}
    same_volume = Fraction(len(Kr), len(Km)) == Fraction(len(Kr2), len(Km2))
    return mapped == right and same_volume


def corrupt(iso: Sequence[int], i: int, j: int) -> list[int]:
    """Swap two images: a negative control."""
    out = list(iso)
    out[i], out[j] = out[j], out[i]
    return out


def random_element(table: HeckeTable, rng: random.Random, lo: int = -3, hi: int = 3) -> list[Fraction]:
    return [Fraction(rng.randint(lo, hi)) for _ in range(table.dim)]
