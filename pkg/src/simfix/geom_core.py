"""Plane primitives: points, normalized lines, and the tolerant predicates the
constructions are built from.

Lines are stored in implicit form ``a*x + b*y = c`` with ``(a, b)`` a unit
normal whose first clearly nonzero component is positive, so two
representations of the same line compare equal coordinate-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import CoincidentPoints, DegenerateInput, ParallelLines

# Below this magnitude a normal component is treated as zero when fixing the sign.
_SIGN_EPS = 1e-12


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateInput(f"non-finite coordinate in Point({self.x}, {self.y})")

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Point:
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> Point:
        return Point(-self.x, -self.y)

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dot(self, other: Point) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point) -> float:
        return self.x * other.y - self.y * other.x

    def unit(self) -> Point:
        n = self.norm()
        if n == 0.0:
            raise DegenerateInput("zero vector has no direction")
        return Point(self.x / n, self.y / n)


ORIGIN = Point(0.0, 0.0)


@dataclass(frozen=True, slots=True)
class Line:
    """The line ``a*x + b*y = c``; normalized on construction."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
            raise DegenerateInput(f"non-finite line coefficients ({a}, {b}, {c})")
        n = math.hypot(a, b)
        if n == 0.0:
            raise DegenerateInput("line normal (a, b) is zero")
        if abs(a) > _SIGN_EPS * n:
            negate = a < 0
        else:
            negate = b < 0
        if negate:
            n = -n
        # "+ 0.0" folds negative zero
        object.__setattr__(self, "a", a / n + 0.0)
        object.__setattr__(self, "b", b / n + 0.0)
        object.__setattr__(self, "c", c / n + 0.0)

    @property
    def normal(self) -> Point:
        return Point(self.a, self.b)

    @property
    def direction(self) -> Point:
        """Unit direction: the normal turned clockwise by a quarter turn."""
        return Point(self.b, -self.a)

    def foot(self) -> Point:
        """Point of the line closest to the origin."""
        return Point(self.a * self.c, self.b * self.c)

    def residual(self, p: Point) -> float:
        return self.a * p.x + self.b * p.y - self.c

    def distance_to(self, p: Point) -> float:
        return abs(self.residual(p))

    def approx_eq(self, other: Line, tol: Tolerances | None = None) -> bool:
        tol = tol or DEFAULT_TOL
        scale = max(1.0, abs(self.c), abs(other.c))
        return (
            abs(self.a - other.a) <= tol.eps_parallel
            and abs(self.b - other.b) <= tol.eps_parallel
            and abs(self.c - other.c) <= tol.eps_point * scale
        )


@dataclass(frozen=True, slots=True)
class Triangle:
    p1: Point
    p2: Point
    p3: Point

    def __iter__(self) -> Iterator[Point]:
        yield self.p1
        yield self.p2
        yield self.p3

    def signed_area(self) -> float:
        return signed_area(self.p1, self.p2, self.p3)

    def diameter(self) -> float:
        return max(distance(self.p1, self.p2), distance(self.p2, self.p3), distance(self.p1, self.p3))


@dataclass(frozen=True)
class Tolerances:
    eps_parallel: float = 1e-9
    eps_point: float = 1e-9
    eps_degenerate: float = 1e-12
    eps_ratio: float = 1e-3

    def __post_init__(self):
        for name in ("eps_parallel", "eps_point", "eps_degenerate", "eps_ratio"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        if self.eps_ratio >= 1:
            raise ValueError("eps_ratio must be < 1")


DEFAULT_TOL = Tolerances()


def distance(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def coincident(p: Point, q: Point, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Point equality, absolute near the origin and relative far from it."""
    scale = max(1.0, abs(p.x), abs(p.y), abs(q.x), abs(q.y))
    return distance(p, q) <= tol.eps_point * scale


def on_line(p: Point, l: Line, tol: Tolerances = DEFAULT_TOL) -> bool:
    scale = max(1.0, abs(p.x), abs(p.y), abs(l.c))
    return l.distance_to(p) <= tol.eps_point * scale


def signed_area(p: Point, q: Point, r: Point) -> float:
    return 0.5 * ((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def line_through(p: Point, q: Point, tol: Tolerances = DEFAULT_TOL) -> Line:
    if coincident(p, q, tol):
        raise CoincidentPoints(f"cannot join coincident points {p} and {q}")
    nx, ny = p.y - q.y, q.x - p.x
    # average the two incidences so neither endpoint is favoured
    c = 0.5 * ((nx * p.x + ny * p.y) + (nx * q.x + ny * q.y))
    return Line(nx, ny, c)


def line_through_direction(p: Point, d: Point) -> Line:
    """Line through ``p`` with direction vector ``d``."""
    return Line(-d.y, d.x, -d.y * p.x + d.x * p.y)


def parallel_through(l: Line, p: Point) -> Line:
    return Line(l.a, l.b, l.a * p.x + l.b * p.y)


def crossing_sine(l1: Line, l2: Line) -> float:
    """|sin| of the angle between two lines (the determinant of their normals)."""
    return abs(l1.a * l2.b - l2.a * l1.b)


def is_parallel(l1: Line, l2: Line, tol: Tolerances = DEFAULT_TOL) -> bool:
    return crossing_sine(l1, l2) <= tol.eps_parallel


def intersect(l1: Line, l2: Line, tol: Tolerances = DEFAULT_TOL) -> Point:
    det = l1.a * l2.b - l2.a * l1.b
    if abs(det) <= tol.eps_parallel:
        raise ParallelLines(f"lines {l1} and {l2} are parallel (|det|={abs(det):.3g})")
    x = (l1.c * l2.b - l2.c * l1.b) / det
    y = (l1.a * l2.c - l2.a * l1.c) / det
    return Point(x + 0.0, y + 0.0)


def _area_is_negligible(p: Point, q: Point, r: Point, tol: Tolerances) -> tuple[bool, float]:
    area = signed_area(p, q, r)
    scale = max(distance(p, q), distance(q, r), distance(p, r))
    if scale == 0.0:
        return True, area
    return abs(area) <= tol.eps_degenerate * scale * scale, area


def collinear(p: Point, q: Point, r: Point, tol: Tolerances = DEFAULT_TOL) -> bool:
    return _area_is_negligible(p, q, r, tol)[0]


def orientation(p: Point, q: Point, r: Point, tol: Tolerances = DEFAULT_TOL) -> int:
    """+1 counterclockwise, -1 clockwise, 0 collinear (same test as ``collinear``)."""
    flat, area = _area_is_negligible(p, q, r, tol)
    if flat:
        return 0
    return 1 if area > 0 else -1


def midpoint(p: Point, q: Point) -> Point:
    return Point(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))


def is_between(p: Point, c: Point, q: Point, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when ``c`` lies strictly inside segment ``pq``."""
    if coincident(p, c, tol) or coincident(c, q, tol) or coincident(p, q, tol):
        raise DegenerateInput("betweenness needs three distinct points")
    if not collinear(p, c, q, tol):
        return False
    return (p - c).dot(q - c) < 0


def angle_bisector(c: Point, p: Point, q: Point, tol: Tolerances = DEFAULT_TOL) -> Line:
    """Internal bisector of the angle ``p c q`` as a line through ``c``.

    A straight angle yields the perpendicular to the rays at ``c``.
    """
    if coincident(p, c, tol) or coincident(q, c, tol):
        raise DegenerateInput("angle arms must differ from the vertex")
    u = (p - c).unit()
    v = (q - c).unit()
    s = u + v
    d = u - v
    # u+v and u-v are orthogonal; use whichever is better conditioned
    if s.norm() >= d.norm():
        return line_through_direction(c, s)
    return Line(d.x, d.y, d.x * c.x + d.y * c.y)


def reflect_vector(v: Point, l: Line) -> Point:
    """Reflect a free vector across the direction of ``l``."""
    k = 2.0 * (l.a * v.x + l.b * v.y)
    return Point(v.x - k * l.a, v.y - k * l.b)
