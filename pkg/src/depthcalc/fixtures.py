"""Named inputs shipped with the package, plus synthetic tower generators.

Everything here is plain data; ``get(name)`` returns the JSON form used by
the command line (``--input fixture:NAME``).
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .depth import InducedTorusDatum
from .errors import ValidationError
from .ramification import RamificationProfile

# ---------------------------------------------------------------- profiles

TAME_PROFILES = {
    "unramified-p2": RamificationProfile.unramified(2),
    "tame-p2-e3": RamificationProfile.tame(2, 3),
    "tame-p3-e2": RamificationProfile.tame(3, 2),
    "tame-p5-e4": RamificationProfile.tame(5, 4),
}

WILD_QUADRATIC = RamificationProfile(2, 2, steps=((1, 2),))

# Q_3(zeta_{3^n}) over Q_3 and its subextensions: |G_u| drops at u = 3^k - 1
CYCLOTOMIC_P3 = {
    "zeta3/Q3": RamificationProfile(3, 2),
    "zeta9/Q3": RamificationProfile(3, 6, steps=((2, 3),)),
    "zeta27/Q3": RamificationProfile(3, 18, steps=((2, 9), (8, 3))),
    "zeta9/zeta3": RamificationProfile(3, 3, steps=((2, 3),)),
    "zeta27/zeta3": RamificationProfile(3, 9, steps=((2, 9), (8, 3))),
    "zeta27/zeta9": RamificationProfile(3, 3, steps=((8, 3),)),
}

# (bottom, top, composite): phi_composite = phi_bottom o phi_top
CYCLOTOMIC_TOWERS = [
    ("zeta3/Q3", "zeta9/zeta3", "zeta9/Q3"),
    ("zeta3/Q3", "zeta27/zeta3", "zeta27/Q3"),
    ("zeta9/Q3", "zeta27/zeta9", "zeta27/Q3"),
    ("zeta9/zeta3", "zeta27/zeta9", "zeta27/zeta3"),
]

STRICTNESS_TORUS = InducedTorusDatum((RamificationProfile.unramified(2), WILD_QUADRATIC))


# ---------------------------------------------------------------- synthetic towers

def _merge(steps):
    """Collapse runs of equal orders and drop trivial ones."""
    out = []
    for u, n in steps:
        if n == 1:
            break
        if out and out[-1][1] == n:
            out[-1] = (u, n)
        else:
            out.append((u, n))
    return tuple(out)


def _integral(e: int, steps, u: Fraction) -> Fraction:
    """``int_0^u |G_t| / e dt`` straight from the step data."""
    total, prev = Fraction(0), Fraction(0)
    for end, n in steps:
        if u <= prev:
            break
        seg = min(u, end) - prev
        total += seg * n / e
        prev = end
    if u > prev:
        total += (u - prev) / e
    return total


def cyclic_tower(G: RamificationProfile, d: int) -> tuple[RamificationProfile, RamificationProfile]:
    """Split ``L/K`` with cyclic inertia into ``L/E`` (order ``d``) and ``E/K``.

    The subgroup filtration is ``H_u = G_u cap H``, which for cyclic groups
    has order ``gcd(|G_u|, d)``; the quotient filtration comes from
    Herbrand's theorem, ``(G/H)_v = G_u H / H`` with ``v = phi_{L/E}(u)``.
    """
    if G.e % d:
        raise ValidationError(f"{d} does not divide e = {G.e}")
    sub_steps = _merge([(u, gcd(n, d)) for u, n in G.steps])
    H = RamificationProfile(G.p, d, steps=sub_steps)
    quot = _merge([(_integral(d, H.steps, u), n // gcd(n, d)) for u, n in G.steps])
    Q = RamificationProfile(G.p, G.e // d, steps=quot)
    return H, Q


def random_profile(rng: random.Random, p: int | None = None, max_wild: int = 3,
                   tame_only: bool = False) -> RamificationProfile:
    p = p or rng.choice([2, 3, 5])
    tame = rng.choice([k for k in range(1, 7) if k % p])
    if tame_only:
        return RamificationProfile(p, tame, f_res=rng.randint(1, 3))
    k = rng.randint(0, max_wild)
    e = tame * p ** k
    steps, u = [], Fraction(0)
    orders = sorted({p ** rng.randint(1, k) for _ in range(k)}, reverse=True) if k else []
    for n in orders:
        u += Fraction(rng.randint(1, 12), rng.randint(1, 4))
        steps.append((u, n))
    return RamificationProfile(p, e, f_res=rng.randint(1, 2), steps=tuple(steps))


def random_tower(rng: random.Random):
    """``(bottom, top, composite)`` for a random synthetic two-step tower."""
    G = random_profile(rng)
    d = rng.choice([d for d in range(1, G.e + 1) if G.e % d == 0])
    H, Q = cyclic_tower(G, d)
    return Q, H, G


def random_induced_torus(rng: random.Random, max_factors: int = 4) -> InducedTorusDatum:
    p = rng.choice([2, 3, 5])
    return InducedTorusDatum(tuple(random_profile(rng, p) for _ in range(rng.randint(1, max_factors))))


def random_rational(rng: random.Random, top: int = 20, den: int = 12) -> Fraction:
    return Fraction(rng.randint(0, top * den), rng.randint(1, den))


# ---------------------------------------------------------------- registry

def _hecke_fixture_a1(q: int = 3) -> dict:
    return {"coxeter": {"labels": ["s"], "bonds": []}, "q": {"s": str(q)}}


FIXTURES = {
    "wild-quadratic": lambda: WILD_QUADRATIC.to_json(),
    "strictness-torus": lambda: {"torus": STRICTNESS_TORUS.to_json(), "r": "1",
                                 "active": [True, False]},
    "cyclotomic-p3": lambda: {k: v.to_json() for k, v in CYCLOTOMIC_P3.items()},
    "cyclotomic-p3-towers": lambda: {"towers": [
        {"bottom": CYCLOTOMIC_P3[a].to_json(), "top": CYCLOTOMIC_P3[b].to_json(),
         "composite": CYCLOTOMIC_P3[c].to_json(), "names": [a, b, c]}
        for a, b, c in CYCLOTOMIC_TOWERS]},
    "sl2": lambda: {"root_datum": "SL2"},
    "gl2": lambda: {"root_datum": "GL2"},
    "sl2-minus-one": lambda: {"root_datum": "SL2", "frobenius": [[-1]]},
    "sl2-f3-borel": lambda: {"p": 3, "ell": 1, "ring": "zmod", "group": "SL2", "subgroup": "iwahori"},
    "affine-a1-q3": lambda: {"coxeter": {"affine": "SL2"}, "q": "3"},
    "affine-a1-omega": lambda: {"coxeter": {"affine": "PGL2"}, "omega": "affine", "q": "3"},
    "finite-a1-q3": _hecke_fixture_a1,
}
for _name, _prof in TAME_PROFILES.items():
    FIXTURES[_name] = (lambda prof=_prof: prof.to_json())

# shipped sigma configurations (root datum preset, Frobenius matrix)
SIGMA_CONFIGS = {
    "T1-minus-one": ("T1", [[-1]]),
    "T2-minus-one": ("T2", [[-1, 0], [0, -1]]),
    "T2-rotation": ("T2", [[0, -1], [1, 0]]),
    "T2-order-three": ("T2", [[0, -1], [1, -1]]),
    "T2-order-six": ("T2", [[1, -1], [1, 0]]),
    "SL2-minus-one": ("SL2", [[-1]]),
    "SL2-trivial": ("SL2", [[1]]),
    "PGL2-minus-one": ("PGL2", [[-1]]),
    "A2-minus-one": ("A2", [[-1, 0], [0, -1]]),
    "A2-trivial": ("A2", [[1, 0], [0, 1]]),
    "B2-minus-one": ("B2", [[-1, 0], [0, -1]]),
    "T2-swap": ("T2", [[0, 1], [1, 0]]),
}
for _name, (_rd, _m) in SIGMA_CONFIGS.items():
    FIXTURES[f"sigma:{_name}"] = (lambda rd=_rd, m=_m: {"root_datum": rd, "frobenius": m})


def names() -> list[str]:
    return sorted(FIXTURES)


def get(name: str):
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValidationError(f"unknown fixture {name!r}; known: {', '.join(names())}") from None
