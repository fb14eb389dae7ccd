"""Exact piecewise-linear functions on the half line [0, oo).

Every Herbrand function and every depth-transfer function in this package is
a :class:`PLFunction`: a continuous, strictly increasing function given by a
finite list of rational breakpoints and the slope of the final ray.  All
arithmetic is done with :class:`fractions.Fraction`; there is no float path.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError

Rational = Fraction | int


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction.

    Floats are rejected on purpose: a float has already lost exactness.
    """
    if isinstance(value, bool):
        raise ValidationError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational number: {value!r}") from exc
    raise ValidationError(f"not an exact rational: {value!r}")


@dataclass(frozen=True, eq=False)
class PLFunction:
    """Continuous strictly increasing piecewise-linear map [0, oo) -> [0, oo).

    ``breakpoints`` is a tuple of ``(x, y)`` pairs with ``x`` strictly
    increasing from 0; ``final_slope`` is the slope to the right of the last
    breakpoint.  Equality and hashing go through :meth:`canonical`, so two
    presentations of the same function compare equal.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    final_slope: Fraction

    def __post_init__(self):
        pts = tuple((as_fraction(x), as_fraction(y)) for x, y in self.breakpoints)
        slope = as_fraction(self.final_slope)
        object.__setattr__(self, "breakpoints", pts)
        object.__setattr__(self, "final_slope", slope)
        if not pts:
            raise ValidationError("a PL function needs at least one breakpoint")
        if pts[0][0] != 0:
            raise ValidationError("first breakpoint must sit at x = 0")
        if pts[0][1] < 0:
            raise ValidationError("values must be nonnegative")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0:
                raise ValidationError("breakpoint abscissae must strictly increase")
            if y1 <= y0:
                raise ValidationError("PL function must be strictly increasing")
        if slope <= 0:
            raise ValidationError("final slope must be positive")

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls) -> PLFunction:
        return cls(((Fraction(0), Fraction(0)),), Fraction(1))

    @classmethod
    def linear(cls, slope: Rational) -> PLFunction:
        return cls(((Fraction(0), Fraction(0)),), as_fraction(slope))

    @classmethod
    def from_slopes(cls, pieces: Iterable[tuple[Rational, Rational]],
                    final_slope: Rational, start: Rational = 0) -> PLFunction:
        """Build from ``(length, slope)`` pieces starting at value ``start``."""
        x, y = Fraction(0), as_fraction(start)
        pts = [(x, y)]
        for length, slope in pieces:
            length, slope = as_fraction(length), as_fraction(slope)
            x += length
            y += length * slope
            pts.append((x, y))
        return cls(tuple(pts), as_fraction(final_slope))

    # -- basic queries ----------------------------------------------------

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.breakpoints)

    def slopes(self) -> tuple[Fraction, ...]:
        """Slopes of every segment, the final ray included."""
        out = [(y1 - y0) / (x1 - x0)
               for (x0, y0), (x1, y1) in zip(self.breakpoints, self.breakpoints[1:])]
        out.append(self.final_slope)
        return tuple(out)

    def __call__(self, x: Rational) -> Fraction:
        return evaluate(self, x)

    def slope_at(self, x: Rational) -> Fraction:
        """Right derivative at ``x``."""
        x = as_fraction(x)
        i = bisect_right(self.xs, x) - 1
        return self.slopes()[i]

    def preimage(self, y: Rational) -> Fraction:
        """The unique ``x`` with ``f(x) = y``; requires ``y >= f(0)``."""
        y = as_fraction(y)
        pts = self.breakpoints
        if y < pts[0][1]:
            raise ValidationError(f"{y} is below f(0) = {pts[0][1]}")
        ys = [p[1] for p in pts]
        i = bisect_right(ys, y) - 1
        x0, y0 = pts[i]
        slope = self.slopes()[i]
        return x0 + (y - y0) / slope

    def is_concave(self) -> bool:
        s = self.slopes()
        return all(a >= b for a, b in zip(s, s[1:]))

    # -- canonical form ---------------------------------------------------

    def canonical(self) -> PLFunction:
        """Drop breakpoints at which the slope does not change."""
        slopes = self.slopes()
        keep = [self.breakpoints[0]]
        for i in range(1, len(self.breakpoints)):
            if slopes[i] != slopes[i - 1]:
                keep.append(self.breakpoints[i])
        if len(keep) == len(self.breakpoints):
            return self
        return PLFunction(tuple(keep), self.final_slope)

    def _key(self):
        c = self.canonical()
        return (c.breakpoints, c.final_slope)

    def __eq__(self, other):
        if not isinstance(other, PLFunction):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in self.breakpoints)
        return f"PLFunction([{pts}], final_slope={self.final_slope})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "breakpoints": [[x.numerator, x.denominator, y.numerator, y.denominator]
                            for x, y in self.breakpoints],
            "final_slope": [self.final_slope.numerator, self.final_slope.denominator],
        }

    @classmethod
    def from_json(cls, data: dict) -> PLFunction:
        try:
            pts = tuple((Fraction(a, b), Fraction(c, d)) for a, b, c, d in data["breakpoints"])
            num, den = data["final_slope"]
            return cls(pts, Fraction(num, den))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed PL function JSON: {exc}") from exc


def evaluate(f: PLFunction, x: Rational) -> Fraction:
    x = as_fraction(x)
    if x < 0:
        raise ValidationError(f"PL functions live on [0, oo); got x = {x}")
    pts = f.breakpoints
    i = bisect_right(f.xs, x) - 1
    x0, y0 = pts[i]
    if i + 1 < len(pts):
        x1, y1 = pts[i + 1]
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    return y0 + (x - x0) * f.final_slope


def compose(f: PLFunction, g: PLFunction) -> PLFunction:
    """``f o g``: first apply ``g``, then ``f``."""
    xs = set(g.xs)
    g0 = g.breakpoints[0][1]
    for xf in f.xs:
        if xf >= g0:
            xs.add(g.preimage(xf))
    pts = tuple((x, evaluate(f, evaluate(g, x))) for x in sorted(xs))
    return PLFunction(pts, f.final_slope * g.final_slope).canonical()


def inverse(f: PLFunction) -> PLFunction:
    if f.breakpoints[0][1] != 0:
        raise ValidationError("inverse needs f(0) = 0")
    pts = tuple((y, x) for x, y in f.breakpoints)
    return PLFunction(pts, 1 / f.final_slope)


def _crossing(v1, s1, v2, s2) -> Fraction | None:
    """Offset t > 0 where two rays through (0, v1), (0, v2) meet, if any."""
    if s1 == s2:
        return None
    t = (v2 - v1) / (s1 - s2)
    return t if t > 0 else None


def pointwise_max(fs: Sequence[PLFunction]) -> PLFunction:
    fs = list(fs)
    if not fs:
        raise ValidationError("pointwise_max of an empty family")
    if len(fs) == 1:
        return fs[0]
    xs = sorted({x for f in fs for x in f.xs})
    # between consecutive candidates every f is affine, so crossings are
    # found pairwise on each interval and on the final ray
    extra = set()
    bounds = list(zip(xs, xs[1:])) + [(xs[-1], None)]
    for lo, hi in bounds:
        vals = [(evaluate(f, lo), f.slope_at(lo)) for f in fs]
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                t = _crossing(*vals[i], *vals[j])
                if t is not None and (hi is None or lo + t < hi):
                    extra.add(lo + t)
    grid = sorted(set(xs) | extra)
    pts = tuple((x, max(evaluate(f, x) for f in fs)) for x in grid)
    last = grid[-1]
    # beyond the last candidate no two functions cross, so the winner is
    # decided by (value, slope) at that point
    winner = max(fs, key=lambda f: (evaluate(f, last), f.slope_at(last)))
    return PLFunction(pts, winner.slope_at(last)).canonical()


def precompose_scale(f: PLFunction, e: int) -> PLFunction:
    """``x -> f(e * x)``."""
    if isinstance(e, bool) or not isinstance(e, int) or e <= 0:
        raise ValidationError(f"scale factor must be a positive integer, got {e!r}")
    pts = tuple((x / e, y) for x, y in f.breakpoints)
    return PLFunction(pts, f.final_slope * e)


def equals(f: PLFunction, g: PLFunction) -> bool:
    return f == g
