"""Presented Hecke algebras ``C[Omega, mu] x| H(W_aff, q)``.

Coxeter groups are realised through a generalised Cartan matrix, which
restricts the bond orders to the crystallographic values 2, 3, 4, 6 and
infinity (encoded as 0).  Group elements are stored as lex-minimal reduced
words over label indices; the matrices on the root lattice decide descents.

Omega is a small finite group given by a multiplication table (element 0 is
the identity) together with its permutation action on the simple labels.
The 2-cocycle ``mu`` takes values in the ``N``-th roots of unity and is stored
as exponents modulo ``N``; coefficients live in ``Q(zeta_N)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping, Sequence

from .errors import ComputationError, ResourceLimitError, ValidationError
from .plcalc import as_fraction

INF = 0
LENGTH_CAP = 64
OMEGA_CAP = 16
COBOUNDARY_CAP = 10**6


# ---------------------------------------------------------------- cyclotomic

def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    q = [0] * max(1, len(num) - len(den) + 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1] // den[-1]
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        while num and num[-1] == 0:
            num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of ``Phi_n``, lowest degree first."""
    if n < 1:
        raise ValidationError("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    while poly and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


class CyclotomicField:
    """``Q(zeta_N)`` with elements as coefficient tuples in the power basis."""

    def __init__(self, order: int):
        self.order = order
        self.modulus = cyclotomic_polynomial(order)
        self.degree = len(self.modulus) - 1

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.order == self.order

    def __hash__(self):
        return hash(self.order)

    def _reduce(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        coeffs = list(coeffs)
        m, d = self.modulus, self.degree
        for top in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[top]
            if c:
                for i in range(d + 1):
                    coeffs[top - d + i] -= c * m[i]
        coeffs = coeffs[:d] + [Fraction(0)] * (d - len(coeffs))
        return tuple(coeffs)

    def scalar(self, x) -> tuple[Fraction, ...]:
        return (as_fraction(x),) + (Fraction(0),) * (self.degree - 1)

    def zero(self):
        return (Fraction(0),) * self.degree

    def one(self):
        return self.scalar(1)

    def zeta(self, k: int) -> tuple[Fraction, ...]:
        k %= self.order
        return self._reduce([Fraction(0)] * k + [Fraction(1)])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        out = [Fraction(0)] * (2 * self.degree)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self._reduce(out)

    def scale(self, a, c: Fraction):
        return tuple(x * c for x in a)

    def is_zero(self, a) -> bool:
        return not any(a)

    def rational(self, a) -> Fraction | None:
        """The value when ``a`` is rational, else ``None``."""
        if any(a[1:]):
            return None
        return a[0]

    def format(self, a) -> str:
        parts = []
        for i, c in enumerate(a):
            if c:
                parts.append(str(c) if i == 0 else f"{c}*z^{i}")
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------- Coxeter

def _parse_bond(m) -> int:
    if isinstance(m, str):
        if m.lower() in ("inf", "infinity", "oo"):
            return INF
        m = int(m)
    if m is None:
        return INF
    m = int(m)
    if m not in (INF, 2, 3, 4, 6):
        raise ValidationError(f"bond order {m} is not crystallographic (2, 3, 4, 6, inf)")
    return m


_CARTAN_PAIR = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3), INF: (-2, -2)}


class CoxeterSystem:
    """A crystallographic Coxeter system with named generators."""

    def __init__(self, labels: Sequence[str], bonds: Mapping | Sequence = (),
                 length_cap: int = LENGTH_CAP):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate Coxeter labels")
        n = len(labels)
        self.labels = labels
        self.label_index = {s: i for i, s in enumerate(labels)}
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        items = bonds.items() if isinstance(bonds, Mapping) else [((b[0], b[1]), b[2]) for b in bonds]
        for (a, b), order in items:
            if a not in self.label_index or b not in self.label_index or a == b:
                raise ValidationError(f"bad bond ({a}, {b})")
            i, j = self.label_index[a], self.label_index[b]
            m[i][j] = m[j][i] = _parse_bond(order)
        self.m = tuple(tuple(r) for r in m)
        self.length_cap = length_cap
        cart = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                cart[i][j], cart[j][i] = _CARTAN_PAIR[self.m[i][j]]
        self.cartan = tuple(tuple(r) for r in cart)
        # s_i(alpha_j) = alpha_j - a_ij alpha_i, stored column-wise
        self._gens = []
        for i in range(n):
            S = [[int(r == c) for c in range(n)] for r in range(n)]
            for j in range(n):
                S[i][j] -= cart[i][j]
            self._gens.append(tuple(tuple(r) for r in S))
        self._identity = tuple(tuple(int(r == c) for c in range(n)) for r in range(n))
        self._word_cache: dict[tuple, tuple] = {(): (self._identity, self._identity)}
        self._nf_cache: dict[tuple, tuple] = {self._identity: ()}

    @property
    def rank(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        return (isinstance(other, CoxeterSystem) and self.labels == other.labels
                and self.m == other.m)

    def __hash__(self):
        return hash((self.labels, self.m))

    def bond(self, i: int, j: int) -> int:
        return self.m[i][j]

    @staticmethod
    def _mm(A, B):
        n = len(A)
        return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n))
                     for i in range(n))

    def _matrices(self, word: tuple) -> tuple:
        """``(w, w^-1)`` as matrices for an arbitrary word."""
        hit = self._word_cache.get(word)
        if hit is not None:
            return hit
        W, Winv = self._matrices(word[:-1])
        S = self._gens[word[-1]]
        out = (self._mm(W, S), self._mm(S, Winv))
        if len(self._word_cache) < 200_000:
            self._word_cache[word] = out
        return out

    def _normal_form(self, W, Winv) -> tuple:
        key = W
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        word = []
        n = self.rank
        while W != self._identity:
            for i in range(n):
                col = [Winv[r][i] for r in range(n)]
                if any(x < 0 for x in col):
                    break
            else:  # pragma: no cover - every nontrivial element has a descent
                raise AssertionError("no left descent found")
            word.append(i)
            if len(word) > self.length_cap:
                raise ResourceLimitError(f"word length exceeds cap {self.length_cap}")
            S = self._gens[i]
            W, Winv = self._mm(S, W), self._mm(Winv, S)
        nf = tuple(word)
        self._nf_cache[key] = nf
        return nf

    def normalize(self, word: Sequence[int]) -> tuple:
        """Lex-minimal reduced word of the element spelled by ``word``."""
        word = tuple(word)
        if len(word) > 4 * self.length_cap:
            raise ResourceLimitError("word too long")
        W, Winv = self._matrices(word)
        return self._normal_form(W, Winv)

    def parse(self, word) -> tuple:
        if isinstance(word, str):
            word = [w for w in word.replace(",", " ").split() if w]
        try:
            return self.normalize(tuple(self.label_index[s] for s in word))
        except KeyError as exc:
            raise ValidationError(f"unknown label {exc}") from None

    def names(self, word: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in word)

    def length(self, word) -> int:
        return len(self.normalize(word))

    def left_mult_goes_up(self, i: int, word: tuple) -> bool:
        """Whether ``l(s_i w) > l(w)``: equivalently ``w^-1 alpha_i > 0``."""
        _, Winv = self._matrices(word)
        return all(Winv[r][i] >= 0 for r in range(self.rank))

    def conjugacy_classes_of_generators(self) -> list[set[int]]:
        """Generators joined by odd bonds are conjugate."""
        parent = list(range(self.rank))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(self.rank):
            for j in range(self.rank):
                if i != j and self.m[i][j] == 3:
                    parent[find(i)] = find(j)
        classes: dict[int, set[int]] = {}
        for i in range(self.rank):
            classes.setdefault(find(i), set()).add(i)
        return sorted(classes.values(), key=min)

    def to_json(self) -> dict:
        bonds = []
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.m[i][j] != 2:
                    bonds.append([self.labels[i], self.labels[j],
                                  "inf" if self.m[i][j] == INF else self.m[i][j]])
        return {"labels": list(self.labels), "bonds": bonds}

    @classmethod
    def from_json(cls, data: dict) -> CoxeterSystem:
        if "affine" in data:
            from .affine import AffineConfig
            from .rootdata import preset
            return coxeter_from_affine(AffineConfig(preset(data["affine"])))
        try:
            return cls(data["labels"], [tuple(b) for b in data.get("bonds", [])])
        except (KeyError, TypeError, IndexError) as exc:
            raise ValidationError(f"bad Coxeter JSON: {exc}") from None


def coxeter_from_affine(cfg, max_order: int = 6) -> CoxeterSystem:
    """Affine Coxeter system read off the simple affine reflections of ``cfg``."""
    refl = cfg.simple_reflections()
    nfin = len(cfg.rd.simple_roots())
    labels = [f"s{i + 1}" for i in range(nfin)]
    naff = len(refl) - nfin
    labels += ["s0"] if naff == 1 else [f"s0_{k}" for k in range(naff)]
    ident = cfg.identity()
    for s in refl:
        if cfg.length(s) != 1:
            raise ValidationError("simple affine reflection of length != 1")
    bonds = []
    for i in range(len(refl)):
        for j in range(i + 1, len(refl)):
            prod = refl[i] * refl[j]
            x, order = prod, 1
            while x != ident and order <= max_order:
                x, order = x * prod, order + 1
            m = order if x == ident else INF
            if m != 2:
                bonds.append((labels[i], labels[j], m))
    return CoxeterSystem(labels, bonds)


# ---------------------------------------------------------------- Omega, mu

@dataclass(frozen=True)
class OmegaGroup:
    """A finite group with a label-permuting action; element 0 is the identity."""

    table: tuple[tuple[int, ...], ...]
    action: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        action = tuple(tuple(int(x) for x in row) for row in self.action)
        n = len(table)
        names = tuple(self.names) or tuple(str(i) for i in range(n))
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "names", names)
        if n == 0 or n > OMEGA_CAP:
            raise ValidationError(f"Omega must have between 1 and {OMEGA_CAP} elements")
        if any(len(r) != n or not all(0 <= x < n for x in r) for r in table):
            raise ValidationError("multiplication table is not square over the elements")
        if len(action) != n or len(names) != n:
            raise ValidationError("need one permutation and one name per Omega element")
        if any(table[0][a] != a or table[a][0] != a for a in range(n)):
            raise ValidationError("element 0 must be the identity")
        for a in range(n):
            if 0 not in table[a]:
                raise ValidationError(f"element {a} has no inverse")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValidationError("multiplication table is not associative")
        k = len(action[0])
        for perm in action:
            if sorted(perm) != list(range(k)):
                raise ValidationError("Omega must act by permutations of the labels")
        for a in range(n):
            for b in range(n):
                ab = table[a][b]
                if any(action[ab][i] != action[a][action[b][i]] for i in range(k)):
                    raise ValidationError("the label action is not a homomorphism")

    @property
    def order(self) -> int:
        return len(self.table)

    def inv(self, a: int) -> int:
        return self.table[a].index(0)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x, k = self.table[x][a], k + 1
        return k

    def generators(self) -> list[int]:
        gens, H = [], {0}
        for a in range(self.order):
            if a not in H:
                gens.append(a)
                H = self._closure(gens)
        return gens

    def _closure(self, gens) -> set[int]:
        seen, frontier = {0}, [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    @classmethod
    def trivial(cls, nlabels: int) -> OmegaGroup:
        return cls(((0,),), (tuple(range(nlabels)),), ("1",))

    @classmethod
    def cyclic(cls, order: int, generator_perm: Sequence[int]) -> OmegaGroup:
        k = len(generator_perm)
        perms = [tuple(range(k))]
        for _ in range(1, order):
            perms.append(tuple(generator_perm[x] for x in perms[-1]))
        table = tuple(tuple((a + b) % order for b in range(order)) for a in range(order))
        names = ("1",) + tuple(f"w^{a}" if a > 1 else "w" for a in range(1, order))
        return cls(table, tuple(perms), names)

    @classmethod
    def product(cls, A: OmegaGroup, B: OmegaGroup) -> OmegaGroup:
        """Direct product; elements are ``a * |B| + b``."""
        nb = B.order
        n = A.order * nb
        table = tuple(tuple(A.table[x // nb][y // nb] * nb + B.table[x % nb][y % nb]
                            for y in range(n)) for x in range(n))
        k = len(A.action[0])
        action = tuple(tuple(A.action[x // nb][B.action[x % nb][i]] for i in range(k))
                       for x in range(n))
        names = tuple(f"({A.names[x // nb]},{B.names[x % nb]})" for x in range(n))
        return cls(table, action, names)

    def to_json(self) -> dict:
        return {"names": list(self.names), "table": [list(r) for r in self.table],
                "action": [list(r) for r in self.action]}

    @classmethod
    def from_json(cls, data, coxeter: CoxeterSystem) -> OmegaGroup:
        if data is None:
            return cls.trivial(coxeter.rank)
        if "cyclic" in data:
            gen = data.get("generator", {})
            perm = [coxeter.label_index[gen.get(s, s)] for s in coxeter.labels]
            return cls.cyclic(int(data["cyclic"]), perm)
        try:
            action = []
            for row in data["action"]:
                if isinstance(row, Mapping):
                    action.append([coxeter.label_index[row.get(s, s)] for s in coxeter.labels])
                else:
                    action.append([coxeter.label_index[s] if isinstance(s, str) else int(s)
                                   for s in row])
            return cls(data["table"], action, tuple(data.get("names", ())))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad Omega JSON: {exc}") from None


def omega_from_affine(cfg, coxeter: CoxeterSystem, box: int = 2) -> OmegaGroup:
    """Length-zero elements of ``cfg`` with their conjugation action on simple reflections."""
    if cfg.omega.free_rank:
        raise ValidationError("Omega is infinite for this datum")
    refl = cfg.simple_reflections()
    found = {}
    for lam in itertools.product(range(-box, box + 1), repeat=cfg.rank):
        for w in range(len(cfg.weyl)):
            x = cfg.element(lam, w)
            if cfg.length(x) == 0:
                found[(x.translation, x.finite)] = x
    elems = sorted(found.values(), key=lambda x: (x != cfg.identity(), x.translation, x.finite))
    if len(elems) != cfg.omega.order:
        raise ComputationError(f"found {len(elems)} length-zero elements, "
                                    f"expected {cfg.omega.order}")
    idx = {(x.translation, x.finite): i for i, x in enumerate(elems)}
    table = [[idx[((a * b).translation, (a * b).finite)] for b in elems] for a in elems]
    action = []
    for t in elems:
        tinv = cfg.inverse(t)
        row = []
        for s in refl:
            c = t * s * tinv
            row.append(next(j for j, r in enumerate(refl) if r == c))
        action.append(row)
    names = tuple("1" if i == 0 else f"tau{i}" for i in range(len(elems)))
    return OmegaGroup(table, action, names)


@dataclass(frozen=True)
class Cocycle:
    """Normalised 2-cocycle with values ``zeta_N ** values[a][b]``."""

    order: int
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValidationError("cocycle order must be positive")
        vals = tuple(tuple(int(x) % self.order for x in row) for row in self.values)
        object.__setattr__(self, "values", vals)

    def check(self, omega: OmegaGroup) -> None:
        n, N, mu = omega.order, self.order, self.values
        if len(mu) != n or any(len(r) != n for r in mu):
            raise ValidationError("cocycle table does not match Omega")
        if any(mu[0][a] or mu[a][0] for a in range(n)):
            raise ValidationError("cocycle is not normalised")
        T = omega.table
        for a, b, c in itertools.product(range(n), repeat=3):
            if (mu[a][b] + mu[T[a][b]][c] - mu[b][c] - mu[a][T[b][c]]) % N:
                raise ValidationError(f"cocycle identity fails at ({a}, {b}, {c})")

    @classmethod
    def trivial(cls, n: int, order: int = 1) -> Cocycle:
        return cls(order, tuple((0,) * n for _ in range(n)))

    def rescale(self, order: int) -> Cocycle:
        if order % self.order:
            raise ValidationError("can only rescale to a multiple of the order")
        f = order // self.order
        return Cocycle(order, tuple(tuple(x * f for x in r) for r in self.values))

    def times_coboundary(self, omega: OmegaGroup, c: Sequence[int]) -> Cocycle:
        T = omega.table
        n = omega.order
        return Cocycle(self.order, tuple(tuple(self.values[a][b] + c[a] + c[b] - c[T[a][b]]
                                               for b in range(n)) for a in range(n)))

    def to_json(self) -> dict:
        return {"order": self.order, "values": [list(r) for r in self.values]}

    @classmethod
    def from_json(cls, data, n: int) -> Cocycle:
        if data is None:
            return cls.trivial(n)
        return cls(int(data["order"]), tuple(tuple(r) for r in data["values"]))


def klein_cocycle(omega: OmegaGroup) -> Cocycle:
    """The bilinear class ``mu(a, b) = a_1 b_2`` on ``Z/2 x Z/2`` (element ``2 a_1 + a_2``)."""
    if omega.order != 4:
        raise ValidationError("expects the Klein four group encoded as a product")
    return Cocycle(2, tuple(tuple((a >> 1) * (b & 1) for b in range(4)) for a in range(4)))


@dataclass(frozen=True)
class HeckeParams:
    q: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        items = tuple(sorted((str(k), as_fraction(v)) for k, v in dict(self.q).items()))
        object.__setattr__(self, "q", items)
        for k, v in items:
            if v <= 0:
                raise ValidationError(f"q({k}) must be positive")

    @classmethod
    def of(cls, mapping: Mapping) -> HeckeParams:
        return cls(tuple(mapping.items()))

    def __getitem__(self, label: str) -> Fraction:
        return dict(self.q)[label]

    def check(self, coxeter: CoxeterSystem) -> None:
        q = dict(self.q)
        if set(q) != set(coxeter.labels):
            raise ValidationError("q must be given for exactly the Coxeter labels")
        for cls_ in coxeter.conjugacy_classes_of_generators():
            vals = {q[coxeter.labels[i]] for i in cls_}
            if len(vals) > 1:
                names = sorted(coxeter.labels[i] for i in cls_)
                raise ValidationError(f"braid-linked labels {names} carry different q")

    def to_json(self) -> dict:
        return {k: str(v) for k, v in self.q}


# ---------------------------------------------------------------- algebra

class BlockAlgebra:
    """Multiplication oracle for ``C[Omega, mu] x| H(W_aff, q)``."""

    def __init__(self, coxeter: CoxeterSystem, omega: OmegaGroup, params: HeckeParams,
                 cocycle: Cocycle):
        params.check(coxeter)
        if len(omega.action[0]) != coxeter.rank:
            raise ValidationError("Omega acts on the wrong number of labels")
        for perm in omega.action:
            for i in range(coxeter.rank):
                for j in range(coxeter.rank):
                    if coxeter.m[perm[i]][perm[j]] != coxeter.m[i][j]:
                        raise ValidationError("Omega does not preserve the Coxeter diagram")
                if params[coxeter.labels[perm[i]]] != params[coxeter.labels[i]]:
                    raise ValidationError(
                        f"q is not Omega-invariant at {coxeter.labels[i]}")
        cocycle.check(omega)
        self.coxeter = coxeter
        self.omega = omega
        self.params = params
        self.cocycle = cocycle
        self.field = CyclotomicField(cocycle.order)
        self._q = [params[s] for s in coxeter.labels]
        self._prod_cache: dict[tuple, dict] = {}

    def with_order(self, order: int) -> BlockAlgebra:
        return BlockAlgebra(self.coxeter, self.omega, self.params, self.cocycle.rescale(order))

    # basis constructors
    def element(self, terms: Mapping) -> HeckeElement:
        F = self.field
        out = {}
        for (w, word), c in terms.items():
            key = (int(w), self.coxeter.normalize(word))
            c = c if isinstance(c, tuple) else F.scalar(c)
            out[key] = F.add(out.get(key, F.zero()), c)
        return HeckeElement(self, out)

    def one(self) -> HeckeElement:
        return self.element({(0, ()): 1})

    def T(self, word=()) -> HeckeElement:
        if isinstance(word, str) or (word and isinstance(word[0], str)):
            word = self.coxeter.parse(word)
        return self.element({(0, tuple(word)): 1})

    def omega_elem(self, w: int) -> HeckeElement:
        return self.element({(w, ()): 1})

    def scalar(self, c) -> HeckeElement:
        return self.element({(0, ()): c})

    # products
    def _hecke_words(self, u: tuple, v: tuple) -> dict[tuple, Fraction]:
        """``T_u T_v`` in W_aff, coefficients rational."""
        key = (u, v)
        hit = self._prod_cache.get(key)
        if hit is not None:
            return hit
        cur: dict[tuple, Fraction] = {v: Fraction(1)}
        cox = self.coxeter
        for i in reversed(u):
            q = self._q[i]
            nxt: dict[tuple, Fraction] = {}
            for w, c in cur.items():
                sw = cox.normalize((i,) + w)
                if cox.left_mult_goes_up(i, w):
                    nxt[sw] = nxt.get(sw, 0) + c
                else:
                    nxt[sw] = nxt.get(sw, 0) + q * c
                    nxt[w] = nxt.get(w, 0) + (q - 1) * c
            cur = {w: c for w, c in nxt.items() if c}
        if len(self._prod_cache) < 100_000:
            self._prod_cache[key] = cur
        return cur

    def relabel(self, word: tuple, w: int) -> tuple:
        perm = self.omega.action[w]
        return self.coxeter.normalize(tuple(perm[i] for i in word))

    def multiply(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        if a.algebra is not self or b.algebra is not self:
            raise ValidationError("elements belong to a different algebra")
        F, O, mu = self.field, self.omega, self.cocycle.values
        out: dict[tuple, tuple] = {}
        for (w1, u), c1 in a.terms.items():
            for (w2, v), c2 in b.terms.items():
                w12 = O.mul(w1, w2)
                coeff = F.mul(F.mul(c1, c2), F.zeta(mu[w1][w2]))
                u2 = self.relabel(u, O.inv(w2))
                for word, c in self._hecke_words(u2, v).items():
                    key = (w12, word)
                    out[key] = F.add(out.get(key, F.zero()), F.scale(coeff, c))
        return HeckeElement(self, out)

    def anti_involution(self, x: HeckeElement) -> HeckeElement:
        """``T_w -> T_{w^-1}`` on the affine Hecke part."""
        if any(w for w, _ in x.terms):
            raise ValidationError("anti-involution is only checked on the affine part")
        return HeckeElement(self, {(0, self.coxeter.normalize(tuple(reversed(word)))): c
                                   for (_, word), c in x.terms.items()})

    def basis_sample(self, max_length: int) -> list[tuple]:
        """All ``(omega, word)`` keys with words of length at most ``max_length``."""
        words = {()}
        frontier = {()}
        for _ in range(max_length):
            frontier = {self.coxeter.normalize((i,) + w) for w in frontier
                        for i in range(self.coxeter.rank)}
            frontier = {w for w in frontier if len(w) <= max_length}
            words |= frontier
        return [(om, w) for om in range(self.omega.order) for w in sorted(words, key=lambda x: (len(x), x))]

    def describe(self) -> dict:
        return {"coxeter": self.coxeter.to_json(), "q": self.params.to_json(),
                "omega": self.omega.to_json(), "cocycle": self.cocycle.to_json()}


@dataclass
class HeckeElement:
    algebra: BlockAlgebra
    terms: dict

    def __post_init__(self):
        F = self.algebra.field
        self.terms = {k: v for k, v in self.terms.items() if not F.is_zero(v)}

    def _coerce(self, other) -> HeckeElement:
        if isinstance(other, HeckeElement):
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.algebra.field
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = F.add(out.get(k, F.zero()), v)
        return HeckeElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.algebra.field
        return HeckeElement(self.algebra, {k: F.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return self.algebra.multiply(self, other)
        F = self.algebra.field
        c = other if isinstance(other, tuple) else F.scalar(other)
        return HeckeElement(self.algebra, {k: F.mul(v, c) for k, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            other = self._coerce(other)
        return self.algebra is other.algebra and (self - other).is_zero()

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        A = self.algebra
        out = []
        for (w, word), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0], len(kv[0][1]), kv[0][1])):
            out.append({"omega": A.omega.names[w], "word": list(A.coxeter.names(word)),
                        "coeff": A.field.format(c)})
        return out


def multiply(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    return a.algebra.multiply(a, b)


def build_block_algebra(coxeter: CoxeterSystem, omega: OmegaGroup | None = None,
                        params: HeckeParams | Mapping | None = None,
                        cocycle: Cocycle | None = None) -> BlockAlgebra:
    omega = omega or OmegaGroup.trivial(coxeter.rank)
    if params is None:
        raise ValidationError("q parameters are required")
    if not isinstance(params, HeckeParams):
        params = HeckeParams.of(params)
    cocycle = cocycle or Cocycle.trivial(omega.order)
    return BlockAlgebra(coxeter, omega, params, cocycle)


def algebra_from_json(data: dict) -> BlockAlgebra:
    try:
        cox = CoxeterSystem.from_json(data["coxeter"])
        if data.get("omega") == "affine":
            from .affine import AffineConfig
            from .rootdata import preset
            omega = omega_from_affine(AffineConfig(preset(data["coxeter"]["affine"])), cox)
        else:
            omega = OmegaGroup.from_json(data.get("omega"), cox)
        q = data["q"]
        if not isinstance(q, Mapping):
            q = {s: q for s in cox.labels}
        cocycle = Cocycle.from_json(data.get("cocycle"), omega.order)
    except KeyError as exc:
        raise ValidationError(f"hecke configuration is missing {exc}") from None
    return build_block_algebra(cox, omega, q, cocycle)


# ---------------------------------------------------------------- checks

@dataclass
class RelationReport:
    ok: bool
    checked: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "skipped": self.skipped,
                "failures": self.failures}


def _alternating(alg: BlockAlgebra, i: int, j: int, m: int) -> HeckeElement:
    x = alg.one()
    for k in range(m):
        x = x * alg.T((i if k % 2 == 0 else j,))
    return x


def check_braid(alg: BlockAlgebra) -> RelationReport:
    cox = alg.coxeter
    rep = RelationReport(True)
    for i in range(cox.rank):
        for j in range(i + 1, cox.rank):
            s, t, m = cox.labels[i], cox.labels[j], cox.m[i][j]
            if m == INF:
                rep.skipped.append(f"{s},{t}: infinite bond")
                continue
            rep.checked.append([s, t, m])
            if _alternating(alg, i, j, m) != _alternating(alg, j, i, m):
                rep.ok = False
                rep.failures.append(f"braid relation fails for {s},{t} (m={m})")
    return rep


def check_quadratic(alg: BlockAlgebra) -> RelationReport:
    rep = RelationReport(True)
    for i, s in enumerate(alg.coxeter.labels):
        q = alg.params[s]
        Ts = alg.T((i,))
        rep.checked.append(s)
        if not ((Ts - q) * (Ts + 1)).is_zero():
            rep.ok = False
            rep.failures.append(f"quadratic relation fails for {s}")
    return rep


def check_omega_automorphism(alg: BlockAlgebra) -> RelationReport:
    """``omega T_s omega^-1 = T_{omega(s)}`` and lengths are preserved."""
    rep = RelationReport(True)
    O = alg.omega
    for w in range(O.order):
        ow, owi = alg.omega_elem(w), alg.omega_elem(O.inv(w))
        # omega^-1 as a basis element differs from (omega)^-1 by mu
        inv = owi * alg.field.zeta(-alg.cocycle.values[w][O.inv(w)])
        for i, s in enumerate(alg.coxeter.labels):
            rep.checked.append([O.names[w], s])
            lhs = ow * alg.T((i,)) * inv
            rhs = alg.T((O.action[w][i],))
            if lhs != rhs:
                rep.ok = False
                rep.failures.append(f"conjugation by {O.names[w]} does not send {s} to a generator")
        for key in alg.basis_sample(2):
            if key[0] == 0 and len(alg.relabel(key[1], w)) != len(key[1]):
                rep.ok = False
                rep.failures.append(f"{O.names[w]} changes a length")
    return rep


def check_associativity(alg: BlockAlgebra, trials: int = 50, max_length: int = 2,
                        seed: int = 0) -> bool:
    rng = random.Random(seed)
    basis = alg.basis_sample(max_length)
    for _ in range(trials):
        a, b, c = (alg.element({rng.choice(basis): 1}) for _ in range(3))
        if (a * b) * c != a * (b * c):
            return False
    return True


def q_from_induction(dim1: int, dim2: int | None = None) -> Fraction:
    """``1`` for an irreducible induction, otherwise the larger over the smaller dimension."""
    if dim1 < 1 or (dim2 is not None and dim2 < 1):
        raise ValidationError("dimensions must be positive")
    if dim2 is None:
        return Fraction(1)
    return Fraction(max(dim1, dim2), min(dim1, dim2))


# ---------------------------------------------------------------- matching

@dataclass
class MatchResult:
    ok: bool
    label_map: dict = field(default_factory=dict)
    omega_map: dict = field(default_factory=dict)
    coboundary: dict = field(default_factory=dict)
    coefficient_order: int = 1
    obstruction: str = ""
    anti_involution: bool | None = None
    homomorphism: bool | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "label_map": self.label_map, "omega_map": self.omega_map,
                "coboundary": self.coboundary, "coefficient_order": self.coefficient_order,
                "obstruction": self.obstruction, "anti_involution": self.anti_involution,
                "homomorphism": self.homomorphism}


def _omega_isomorphisms(A: OmegaGroup, B: OmegaGroup):
    if A.order != B.order:
        return
    gens = A.generators()
    orders = [A.element_order(g) for g in gens]
    cands = [[b for b in range(B.order) if B.element_order(b) == o] for o in orders]
    seen = set()
    for images in itertools.product(*cands):
        phi = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, h in zip(gens, images):
                    y, fy = A.mul(x, g), B.mul(phi[x], h)
                    if y in phi:
                        if phi[y] != fy:
                            ok = False
                            break
                    else:
                        phi[y] = fy
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(phi) != A.order or len(set(phi.values())) != A.order:
            continue
        if any(phi[A.mul(a, b)] != B.mul(phi[a], phi[b]) for a in range(A.order) for b in range(A.order)):
            continue
        key = tuple(phi[a] for a in range(A.order))
        if key not in seen:
            seen.add(key)
            yield list(key)


def _find_coboundary(omega: OmegaGroup, diff, N: int, cap: int = COBOUNDARY_CAP):
    """``c`` with ``c(0) = 0`` and ``diff(a, b) = c(a) + c(b) - c(ab) (mod N)``."""
    n = omega.order
    if N ** (n - 1) > cap:
        raise ResourceLimitError(f"{N ** (n - 1)} coboundaries exceed the cap {cap}")
    T = omega.table
    for tail in itertools.product(range(N), repeat=n - 1):
        c = (0,) + tail
        if all((diff[a][b] - c[a] - c[b] + c[T[a][b]]) % N == 0
               for a in range(n) for b in range(n)):
            return list(c)
    return None


_STAGES = ("size", "braid", "q", "omega", "cocycle")


def match_presentations(A: BlockAlgebra, B: BlockAlgebra, verify_length: int = 2) -> MatchResult:
    """Search for a generator correspondence matching all presentation data."""
    ca, cb = A.coxeter, B.coxeter
    if ca.rank != cb.rank:
        return MatchResult(False, obstruction=f"rank mismatch: {ca.rank} vs {cb.rank} simple reflections")
    if A.omega.order != B.omega.order:
        return MatchResult(False, obstruction=f"Omega order mismatch: {A.omega.order} vs {B.omega.order}")
    N = A.cocycle.order * B.cocycle.order // gcd(A.cocycle.order, B.cocycle.order)
    muA, muB = A.cocycle.rescale(N).values, B.cocycle.rescale(N).values
    n = ca.rank
    best = (-1, "")
    # identity-by-name first so the natural matching is reported
    by_name = [cb.label_index.get(s) for s in ca.labels]
    perms = list(itertools.permutations(range(n)))
    if None not in by_name:
        perms.sort(key=lambda p: p != tuple(by_name))
    for pi in perms:
        stage, why = _match_stage(A, B, pi)
        if stage < _STAGES.index("omega"):
            best = max(best, (stage, why), key=lambda x: x[0])
            continue
        found_omega = False
        for phi in _omega_isomorphisms(A.omega, B.omega):
            if any(pi[A.omega.action[w][i]] != B.omega.action[phi[w]][pi[i]]
                   for w in range(A.omega.order) for i in range(n)):
                continue
            found_omega = True
            diff = [[muA[a][b] - muB[phi[a]][phi[b]] for b in range(A.omega.order)]
                    for a in range(A.omega.order)]
            c = _find_coboundary(A.omega, diff, N)
            if c is None:
                best = max(best, (_STAGES.index("cocycle"),
                                  "cocycle class mismatch: no coboundary over Z/%d relates mu_A and mu_B" % N),
                           key=lambda x: x[0])
                continue
            res = MatchResult(
                True,
                label_map={ca.labels[i]: cb.labels[pi[i]] for i in range(n)},
                omega_map={A.omega.names[w]: B.omega.names[phi[w]] for w in range(A.omega.order)},
                coboundary={A.omega.names[w]: c[w] for w in range(A.omega.order)},
                coefficient_order=N,
            )
            res.homomorphism, res.anti_involution = _verify_matching(A, B, pi, phi, c, N, verify_length)
            if res.homomorphism and res.anti_involution:
                return res
            best = max(best, (len(_STAGES), "matching fails the verification on basis products"),
                       key=lambda x: x[0])
        if not found_omega:
            best = max(best, (_STAGES.index("omega"),
                              "no Omega isomorphism compatible with the label action"),
                       key=lambda x: x[0])
    return MatchResult(False, obstruction=best[1], coefficient_order=N)


def _match_stage(A: BlockAlgebra, B: BlockAlgebra, pi) -> tuple[int, str]:
    ca, cb = A.coxeter, B.coxeter
    n = ca.rank
    for i in range(n):
        for j in range(i + 1, n):
            if ca.m[i][j] != cb.m[pi[i]][pi[j]]:
                return _STAGES.index("braid"), (
                    f"braid mismatch: m({ca.labels[i]},{ca.labels[j]}) = {ca.m[i][j]} but "
                    f"m({cb.labels[pi[i]]},{cb.labels[pi[j]]}) = {cb.m[pi[i]][pi[j]]}")
    for i in range(n):
        qa, qb = A.params[ca.labels[i]], B.params[cb.labels[pi[i]]]
        if qa != qb:
            return _STAGES.index("q"), (
                f"q mismatch at node {ca.labels[i]}: {qa} vs {qb} at {cb.labels[pi[i]]}")
    return _STAGES.index("omega"), ""


def _verify_matching(A, B, pi, phi, c, N, max_length) -> tuple[bool, bool]:
    A2, B2 = A.with_order(N), B.with_order(N)
    F = A2.field

    def image(x: HeckeElement) -> HeckeElement:
        out = {}
        for (w, word), coeff in x.terms.items():
            key = (phi[w], B2.coxeter.normalize(tuple(pi[i] for i in word)))
            out[key] = F.add(out.get(key, F.zero()), F.mul(coeff, F.zeta(c[w])))
        return HeckeElement(B2, out)

    basis = A2.basis_sample(max_length)
    hom = True
    for ka in basis:
        for kb in basis:
            x, y = A2.element({ka: 1}), A2.element({kb: 1})
            if image(x * y) != image(x) * image(y):
                hom = False
                break
        if not hom:
            break
    anti = True
    for ka in A2.basis_sample(max_length + 1):
        if ka[0]:
            continue
        x = A2.element({ka: 1})
        if image(A2.anti_involution(x)) != B2.anti_involution(image(x)):
            anti = False
            break
    return hom, anti


def relabel_algebra(A: BlockAlgebra, renaming: Mapping[str, str]) -> BlockAlgebra:
    """The same algebra with generators renamed (and reordered by name)."""
    cox = A.coxeter
    new_labels = sorted(renaming[s] for s in cox.labels)
    idx = {s: new_labels.index(renaming[s]) for s in cox.labels}
    bonds = []
    for i in range(cox.rank):
        for j in range(i + 1, cox.rank):
            if cox.m[i][j] != 2:
                bonds.append((renaming[cox.labels[i]], renaming[cox.labels[j]], cox.m[i][j] or "inf"))
    newcox = CoxeterSystem(new_labels, bonds)
    old_of_new = {idx[s]: cox.label_index[s] for s in cox.labels}
    action = tuple(tuple(idx[cox.labels[perm[old_of_new[k]]]] for k in range(cox.rank))
                   for perm in A.omega.action)
    omega = OmegaGroup(A.omega.table, action, A.omega.names)
    q = {renaming[s]: A.params[s] for s in cox.labels}
    return build_block_algebra(newcox, omega, q, A.cocycle)


# ---------------------------------------------------------------- finite oracle

@dataclass
class OracleReport:
    ok: bool
    checked: int
    detail: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "detail": self.detail}


def compare_with_finite_oracle(alg: BlockAlgebra, constants, basis: Sequence) -> OracleReport:
    """Compare ``T_{b_i} T_{b_j}`` with ``sum_k c[i][j][k] T_{b_k}``.

    ``constants`` is a 3-index table (for instance from the finite-group
    counting code) and ``basis[k]`` the word matched with its ``k``-th coset.
    """
    dim = len(constants)
    if len(basis) != dim:
        raise ValidationError(f"{len(basis)} basis words for {dim} oracle cosets")
    keys = [alg.T(b) for b in basis]
    index = {}
    for k, x in enumerate(keys):
        (key,) = x.terms
        index[key] = k
    checked = 0
    for i in range(dim):
        for j in range(dim):
            prod = keys[i] * keys[j]
            expected = {k: Fraction(constants[i][j][k]) for k in range(dim) if constants[i][j][k]}
            got = {}
            for key, c in prod.terms.items():
                if key not in index:
                    return OracleReport(False, checked, f"T_{i} T_{j} has a term outside the matched basis")
                r = alg.field.rational(c)
                if r is None:
                    return OracleReport(False, checked, f"T_{i} T_{j} has an irrational coefficient")
                got[index[key]] = r
            if got != expected:
                return OracleReport(False, checked,
                                    f"c[{i}][{j}] = {_fmt(expected)} by counting but {_fmt(got)} presented")
            checked += 1
    return OracleReport(True, checked, f"{checked} products agree")


def _fmt(d: dict) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(d.items())) + "}"
