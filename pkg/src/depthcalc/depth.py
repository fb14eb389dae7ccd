"""Depth of torus parameters and the depth-transfer functions.

Induced tori are lists of extensions.  A general torus is presented by a
finite family of morphisms from induced tori, of which only the sources
matter for the formulas here; the transfer function of such a torus is the
maximum over the declared family, which is the honest computable stand-in
for a supremum over every morphism from an induced torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ValidationError
from .plcalc import PLFunction, as_fraction, evaluate, pointwise_max
from .ramification import RamificationProfile, herbrand_psi, normalized_phi, herbrand_phi


def _nonneg(value, what: str) -> Fraction:
    value = as_fraction(value)
    if value < 0:
        raise ValidationError(f"{what} must be >= 0, got {value}")
    return value


@dataclass(frozen=True)
class InducedTorusDatum:
    """``prod_j Res_{E_j/F} G_m``, one profile per factor."""

    components: tuple[RamificationProfile, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValidationError("an induced torus needs at least one factor")
        if len({c.p for c in comps}) != 1:
            raise ValidationError("all factors must share the residue characteristic")

    @property
    def p(self) -> int:
        return self.components[0].p

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> InducedTorusDatum:
        if "components" not in data:
            raise ValidationError("induced torus JSON needs 'components'")
        return cls(tuple(RamificationProfile.from_json(c) for c in data["components"]))


@dataclass(frozen=True)
class TorusDatum:
    """A torus seen through a declared family of maps from induced tori."""

    generators: tuple[tuple[InducedTorusDatum, str], ...]

    def __post_init__(self):
        gens = tuple((src, str(label)) for src, label in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValidationError("a torus datum needs at least one generator")

    @classmethod
    def induced(cls, source: InducedTorusDatum, label: str = "id") -> TorusDatum:
        return cls(((source, label),))

    def to_json(self) -> dict:
        return {"generators": [{"label": lab, "source": src.to_json()}
                               for src, lab in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> TorusDatum:
        """Accepts either a generator list or a bare induced torus."""
        if "generators" in data:
            gens = []
            for i, g in enumerate(data["generators"]):
                gens.append((InducedTorusDatum.from_json(g["source"]), g.get("label", f"f{i}")))
            return cls(tuple(gens))
        return cls.induced(InducedTorusDatum.from_json(data))


@dataclass(frozen=True)
class InducedParameterDepths:
    std_depths: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "std_depths",
                           tuple(_nonneg(d, "standard depth") for d in self.std_depths))


@dataclass(frozen=True)
class GroupVertexDatum:
    """The tori in the family at a vertex together with the root fields."""

    tori: tuple[TorusDatum, ...]
    root_fields: tuple[RamificationProfile, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tori", tuple(self.tori))
        object.__setattr__(self, "root_fields", tuple(self.root_fields))
        if not self.tori:
            raise ValidationError("a vertex datum needs at least one torus")

    def to_json(self) -> dict:
        return {"tori": [t.to_json() for t in self.tori],
                "root_fields": [a.to_json() for a in self.root_fields]}

    @classmethod
    def from_json(cls, data: dict) -> GroupVertexDatum:
        try:
            tori = tuple(TorusDatum.from_json(t) for t in data["tori"])
        except KeyError as exc:
            raise ValidationError("vertex datum JSON needs 'tori'") from exc
        roots = tuple(RamificationProfile.from_json(a) for a in data.get("root_fields", []))
        return cls(tori, roots)


def param_depth_induced(R: InducedTorusDatum, d: InducedParameterDepths | Sequence) -> Fraction:
    """``max_j psi_j(std_j) / e_j``."""
    if not isinstance(d, InducedParameterDepths):
        d = InducedParameterDepths(tuple(d))
    if len(d.std_depths) != len(R.components):
        raise ValidationError(
            f"{len(d.std_depths)} depths for {len(R.components)} torus factors")
    return max(evaluate(herbrand_psi(E), s) / E.e
               for E, s in zip(R.components, d.std_depths))


def char_param_std_depth(E: RamificationProfile, r) -> Fraction:
    """Standard depth of the parameter of a depth-``r`` character of E^x."""
    r = _nonneg(r, "depth")
    return evaluate(herbrand_phi(E), E.e * r)


def depth_transfer_induced(R: InducedTorusDatum) -> PLFunction:
    return pointwise_max([normalized_phi(E) for E in R.components])


@lru_cache(maxsize=512)
def depth_transfer_torus(T: TorusDatum) -> PLFunction:
    return pointwise_max([depth_transfer_induced(src) for src, _ in T.generators])


def check_phi_bound(T: TorusDatum, dep_new, dep_std) -> bool:
    dep_new = _nonneg(dep_new, "depth")
    dep_std = _nonneg(dep_std, "standard depth")
    return evaluate(depth_transfer_torus(T), dep_new) >= dep_std


def depth_roundtrip_induced(R: InducedTorusDatum, r) -> Fraction:
    """Push depth ``r`` through every factor and read the depth back."""
    r = _nonneg(r, "depth")
    std = [char_param_std_depth(E, r) for E in R.components]
    return param_depth_induced(R, std)


def ell_bound_torus(T: TorusDatum, r) -> int:
    """Least integer ``l >= 1`` with ``Phi_T(r) <= l``."""
    r = _nonneg(r, "depth")
    value = evaluate(depth_transfer_torus(T), r)
    return max(1, math.ceil(value))


def depth_transfer_group(V: GroupVertexDatum) -> PLFunction:
    parts = [depth_transfer_torus(T) for T in V.tori]
    parts += [normalized_phi(a) for a in V.root_fields]
    return pointwise_max(parts)


def ell_bound_group(V: GroupVertexDatum, r) -> int:
    r = _nonneg(r, "depth")
    return max(1, math.ceil(evaluate(depth_transfer_group(V), r)))


def root_bound_check(a: RamificationProfile, r, ell: int) -> bool:
    """Whether ``ell >= phi_a(e_a r)``."""
    r = _nonneg(r, "depth")
    if ell < 1:
        raise ValidationError("truncation level must be >= 1")
    return ell >= char_param_std_depth(a, r)


def param_depth_general(t_w, s_t) -> Fraction:
    """``max(t, s)`` of the two constituents supplied by the caller."""
    return max(_nonneg(t_w, "wild constituent"), _nonneg(s_t, "torus constituent"))
