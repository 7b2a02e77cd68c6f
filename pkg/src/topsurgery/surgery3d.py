"""Torus splittings of S^3, gluing matrices and rational surgery on the unknot.

Curves on a solid-torus boundary are (m, l) column vectors in meridian /
longitude coordinates: meridian (1, 0), longitude (0, 1). 3-manifolds are
represented by splitting data plus a computed H1 certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd

from .errors import InputError
from .invariants import AbelianGroup, IntMatrix, h1_from_presentation


class Side(str, Enum):
    V1 = "V1"
    V2 = "V2"

    def other(self) -> "Side":
        return Side.V2 if self is Side.V1 else Side.V1


@dataclass(frozen=True)
class TorusCurve:
    m: int
    l: int
    side: Side = Side.V1
    through_infinity: bool = False

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "side", Side(self.side))
        if self.m == 0 and self.l == 0:
            raise InputError("the null curve (0, 0) is not a simple closed curve")
        if gcd(self.m, self.l) != 1:
            raise InputError(f"curve coordinates ({self.m}, {self.l}) are not coprime")

    def negated(self) -> "TorusCurve":
        return TorusCurve(-self.m, -self.l, self.side, self.through_infinity)

    def to_dict(self) -> dict:
        return {"m": self.m, "l": self.l, "side": self.side.value}


@dataclass(frozen=True)
class GluingMatrix:
    """Unimodular 2x2 matrix acting on (m, l) column vectors."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.det not in (1, -1):
            raise InputError(f"gluing matrix has determinant {self.det}, expected +-1")

    @classmethod
    def from_rows(cls, rows) -> "GluingMatrix":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def with_first_column(cls, p: int, q: int) -> "GluingMatrix":
        """A unimodular matrix sending the meridian (1, 0) to (p, q)."""
        if gcd(p, q) != 1:
            raise InputError(f"({p}, {q}) is not primitive")
        # p*s - r*q = 1 via the extended Euclidean algorithm
        g, x, y = _egcd(p, q)
        s, r = x * g, -y * g
        return cls(p, r, q, s)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def apply(self, m: int, l: int) -> tuple[int, int]:
        return self.a * m + self.b * l, self.c * m + self.d * l

    def __matmul__(self, other: "GluingMatrix") -> "GluingMatrix":
        return GluingMatrix(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g, g = +-1 times gcd."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


THETA = GluingMatrix(0, 1, 1, 0)


@dataclass(frozen=True)
class SplittingS3:
    """S^3 as V1 glued to V2; the core of V2 passes through the point at infinity."""

    v1_core: str = "c"
    v2_core: str = "l"
    v2_core_through_infinity: bool = True
    gluing: GluingMatrix = THETA

    def __post_init__(self):
        if self.gluing.apply(1, 0) != (0, 1):
            raise InputError("the gluing must send the V2 meridian to the V1 longitude")


def standard_splitting() -> SplittingS3:
    return SplittingS3()


def glue_apply(g: GluingMatrix, c: TorusCurve) -> TorusCurve:
    if not isinstance(g, GluingMatrix):
        g = GluingMatrix.from_rows(g)
    m, l = g.apply(c.m, c.l)
    return TorusCurve(m, l, c.side.other(), c.through_infinity)


def dual_coordinates(c: TorusCurve) -> TorusCurve:
    """Read a curve on the common torus from the other solid torus: (m, l) -> (l, m)."""
    return TorusCurve(c.l, c.m, c.side.other(), c.through_infinity)


@dataclass(frozen=True)
class LensSpaceDescriptor:
    p: int
    q: int
    h1: AbelianGroup = field(compare=False, default=None)
    new_meridian: tuple[int, int] = (0, 0)

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "h1": self.h1.to_dict(), "new_meridian": list(self.new_meridian)}


def lens_presentation(p: int, q: int) -> IntMatrix:
    """Relation matrix of H1 for the filling: rows are relations, one generator.

    H1 of the unknot complement V1 is generated by its longitude; the filling
    curve (p, q) on V2 is carried by the gluing to V1 coordinates, and its
    longitude component is the single relation.
    """
    m, l = THETA.apply(p, q)
    return IntMatrix.from_rows([[l]])


def rational_surgery_unknot(p: int, q: int) -> LensSpaceDescriptor:
    p, q = int(p), int(q)
    if p == 0 and q == 0:
        raise InputError("(p, q) = (0, 0) is not a surgery coefficient")
    if gcd(p, q) != 1:
        raise InputError(f"p and q must be coprime, got ({p}, {q})")
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    h1 = h1_from_presentation(lens_presentation(p, q))
    return LensSpaceDescriptor(p, q, h1, (p, q))


def lens_homeomorphic(a: LensSpaceDescriptor, b: LensSpaceDescriptor) -> bool:
    """Standard classification: L(p, q) ~ L(p, q') iff q' = +-q^(+-1) mod p."""
    if a.p != b.p:
        return False
    p = a.p
    if p in (0, 1):
        return True
    qa, qb = a.q % p, b.q % p
    inv = pow(qa, -1, p)
    return qb in {qa, (-qa) % p, inv, (-inv) % p}


@dataclass(frozen=True)
class ArcDescriptor:
    name: str
    interval: tuple[float, float]
    contains_infinity: bool


@dataclass(frozen=True)
class TruncatedScene3:
    """Local picture of 3-d surgery with the point at infinity removed.

    The surgery curve l (the V2 core) is cut to the arc L inside the cork, a
    solid cylinder filling the hole of V1; the rest l - L lies in the outer
    ball together with the point at infinity.
    """

    mode: str
    cork: ArcDescriptor
    outer_ball: ArcDescriptor
    parallel_curve: TorusCurve

    @property
    def reassembles(self) -> bool:
        """Cork and outer arcs tile the circle l, meeting at both endpoints,
        and exactly the arc holding the point at infinity is flagged."""
        (a0, a1), (b0, b1) = self.cork.interval, self.outer_ball.interval
        tiles = (a1 - b0) % 1.0 == 0 and (b1 - a0) % 1.0 == 0 and (a1 - a0) + (b1 - b0) == 1.0
        return tiles and all(arc.contains_infinity == _holds_infinity(arc.interval)
                             for arc in (self.cork, self.outer_ball))


def _holds_infinity(interval) -> bool:
    lo, hi = interval
    x = lo + ((0.5 - lo) % 1.0)
    return lo < x < hi


CORK_ARC = (-0.25, 0.25)
OUTER_ARC = (0.25, 0.75)


def truncate(s: SplittingS3, curve: TorusCurve, mode: str = "attract") -> TruncatedScene3:
    """Truncate along the V2 core ``s.v2_core``; repelling is the dual picture.

    The circle l is parametrized by [-1/2, 1/2) with infinity at 1/2.
    """
    if mode not in ("attract", "repel"):
        raise InputError(f"unknown mode {mode!r}")
    cork = ArcDescriptor("L", CORK_ARC, False)
    outer = ArcDescriptor(f"{s.v2_core}-L", OUTER_ARC, True)
    if mode == "repel":
        cork, outer = outer, cork
    scene = TruncatedScene3(mode, cork, outer, curve)
    if not scene.reassembles:
        raise InputError("cork and outer ball do not reassemble the solid torus")
    return scene
