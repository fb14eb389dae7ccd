"""Ramification break data and the Herbrand functions it generates.

A finite extension E/F enters the package only through its lower-numbering
filtration.  :class:`RamificationProfile` stores ``|G_0| = e`` together with
the wild steps: ``|G_u| = order_i`` for ``u`` in ``(u_{i-1}, u_i]`` and
``|G_u| = 1`` beyond the last break.  A tame extension has no steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .plcalc import PLFunction, as_fraction, compose, evaluate, inverse, precompose_scale


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class RamificationProfile:
    """Lower-numbering data of a finite extension of local fields.

    Attributes:
        p: residue characteristic.
        e: ramification index, equal to ``|G_0|``.
        f_res: residue degree (carried along, never used in the formulas).
        steps: ``((u_1, n_1), ..., (u_k, n_k))`` with ``0 < u_1 < ... < u_k``
            and ``n_1 > ... > n_k > 1`` powers of ``p``, each dividing the
            previous one and ``e``.
    """

    p: int
    e: int
    f_res: int = 1
    steps: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        steps = tuple((as_fraction(u), int(n)) for u, n in self.steps)
        # a trailing order-1 entry is how the "ends at 1" convention is
        # sometimes written down; it carries no information
        while steps and steps[-1][1] == 1:
            steps = steps[:-1]
        # likewise a leading (0, e) entry just restates |G_0| = e
        if steps and steps[0][0] == 0 and steps[0][1] == self.e:
            steps = steps[1:]
        object.__setattr__(self, "steps", steps)
        if not is_prime(self.p):
            raise ValidationError(f"residue characteristic {self.p} is not prime")
        if self.e < 1 or self.f_res < 1:
            raise ValidationError("ramification index and residue degree must be >= 1")
        prev_u, prev_n = Fraction(0), self.e
        for u, n in steps:
            if u <= prev_u:
                raise ValidationError("break points must be positive and strictly increasing")
            if not _is_power_of(n, self.p) or n == 1:
                raise ValidationError(f"wild order {n} is not a nontrivial power of p={self.p}")
            if prev_n % n or (n == prev_n and prev_u > 0):
                raise ValidationError("orders must strictly decrease by divisibility")
            if self.e % n:
                raise ValidationError(f"order {n} does not divide e={self.e}")
            prev_u, prev_n = u, n

    @property
    def breaks(self) -> tuple[Fraction, ...]:
        return tuple(u for u, _ in self.steps)

    def order_at(self, u) -> int:
        """``|G_u|`` for ``u >= 0``."""
        u = as_fraction(u)
        if u < 0:
            raise ValidationError("lower numbering starts at u = 0 here")
        if u == 0:
            return self.e
        for end, n in self.steps:
            if u <= end:
                return n
        return 1

    # -- JSON ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p, "e": self.e, "f": self.f_res,
            "steps": [[u.numerator, u.denominator, n] for u, n in self.steps],
        }

    @classmethod
    def from_json(cls, data: dict) -> RamificationProfile:
        try:
            steps = tuple((Fraction(a, b), int(n)) for a, b, n in data.get("steps", []))
            return cls(int(data["p"]), int(data["e"]), int(data.get("f", 1)), steps)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed ramification profile: {exc}") from exc

    # -- small factories used by fixtures and tests -----------------------

    @classmethod
    def unramified(cls, p: int, f_res: int = 1) -> RamificationProfile:
        return cls(p, 1, f_res)

    @classmethod
    def tame(cls, p: int, e: int, f_res: int = 1) -> RamificationProfile:
        return cls(p, e, f_res)


@dataclass(frozen=True)
class UpperJumps:
    """Upper-numbering jumps: ``|G^s| = order`` just to the right of ``s``."""

    jumps: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        s_vals = [s for s, _ in self.jumps]
        orders = [n for _, n in self.jumps]
        if any(b <= a for a, b in zip(s_vals, s_vals[1:])):
            raise ValidationError("upper jumps must strictly increase")
        if any(b >= a for a, b in zip(orders, orders[1:])):
            raise ValidationError("orders must strictly decrease")
        if orders and orders[-1] != 1:
            raise ValidationError("the filtration must end at the trivial group")


def herbrand_phi(prof: RamificationProfile) -> PLFunction:
    """``phi(t) = integral_0^t |G_u| / |G_0| du``."""
    pieces = []
    prev = Fraction(0)
    for u, n in prof.steps:
        pieces.append((u - prev, Fraction(n, prof.e)))
        prev = u
    return PLFunction.from_slopes(pieces, Fraction(1, prof.e))


def herbrand_psi(prof: RamificationProfile) -> PLFunction:
    return inverse(herbrand_phi(prof))


def tower_phi(phi_e1_f: PLFunction, phi_e2_e1: PLFunction) -> PLFunction:
    """Herbrand function of E2/F from those of E1/F and E2/E1."""
    for f in (phi_e1_f, phi_e2_e1):
        if f.breakpoints[0][1] != 0:
            raise ValidationError("Herbrand functions vanish at 0")
    return compose(phi_e1_f, phi_e2_e1)


def normalized_phi(prof: RamificationProfile) -> PLFunction:
    """``r -> phi(e r)``; the identity exactly when the extension is tame."""
    return precompose_scale(herbrand_phi(prof), prof.e)


def lower_jumps(prof: RamificationProfile) -> tuple[tuple[Fraction, int], ...]:
    """Lower breaks with the order of ``G_u`` just past each of them."""
    out = []
    first = prof.steps[0][1] if prof.steps else 1
    if first < prof.e:
        out.append((Fraction(0), first))
    for i, (u, _) in enumerate(prof.steps):
        nxt = prof.steps[i + 1][1] if i + 1 < len(prof.steps) else 1
        out.append((u, nxt))
    return tuple(out)


def upper_jumps(prof: RamificationProfile) -> UpperJumps:
    phi = herbrand_phi(prof)
    return UpperJumps(tuple((evaluate(phi, u), n) for u, n in lower_jumps(prof)))


def is_tame(prof: RamificationProfile) -> bool:
    return not prof.steps
