"""Plane similarities: representation, group operations, classification and
the linear-algebra fixed point used as an oracle for the constructions.

A similarity is kept as ``(kind, scale, angle, translation)``. The linear part is
``scale * R(angle)`` for a direct map and ``scale * R(angle) * diag(1, -1)`` for an
indirect one, i.e. a reflection in the line through the origin at ``angle / 2``.
Because only these parameters are stored, the map can never drift into a
general affine map.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

from . import geom_core as gc
from .errors import (
    DegenerateTriangle,
    InvalidRatio,
    IsometryInput,
    NoUniqueFixedPoint,
    NotSimilar,
)
from .geom_core import DEFAULT_TOL, Line, Point, Tolerances, Triangle

ANGLE_TOL_DEG = 1e-7

_EXACT_COS_SIN = {0: (1.0, 0.0), 90: (0.0, 1.0), 180: (-1.0, 0.0), 270: (0.0, -1.0)}


class Kind(str, enum.Enum):
    DIRECT = "direct"
    INDIRECT = "indirect"


def normalize_angle(deg: float) -> float:
    a = math.fmod(deg, 360.0)
    if a < 0:
        a += 360.0
    if a >= 360.0:
        a = 0.0
    return a


def angle_diff(a: float, b: float) -> float:
    """Smallest absolute difference between two angles in degrees."""
    d = abs(normalize_angle(a) - normalize_angle(b))
    return min(d, 360.0 - d)


def angles_close(a: float, b: float, tol: float = ANGLE_TOL_DEG) -> bool:
    return angle_diff(a, b) <= tol


def cos_sin_deg(deg: float) -> tuple[float, float]:
    deg = normalize_angle(deg)
    if deg in _EXACT_COS_SIN:
        return _EXACT_COS_SIN[deg]
    r = math.radians(deg)
    return math.cos(r), math.sin(r)


@dataclass(frozen=True)
class Similarity:
    kind: Kind = Kind.DIRECT
    scale: float = 1.0
    angle: float = 0.0
    translation: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "scale", float(self.scale))
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise InvalidRatio(f"scale must be positive, got {self.scale!r}")
        if not math.isfinite(self.angle):
            raise ValueError("angle must be finite")
        tx, ty = self.translation
        if not (math.isfinite(tx) and math.isfinite(ty)):
            raise ValueError("translation must be finite")
        object.__setattr__(self, "angle", normalize_angle(float(self.angle)))
        object.__setattr__(self, "translation", (float(tx) + 0.0, float(ty) + 0.0))

    @property
    def direct(self) -> bool:
        return self.kind is Kind.DIRECT

    def matrix(self) -> tuple[float, float, float, float]:
        """Linear part as ``(m00, m01, m10, m11)``."""
        c, s = cos_sin_deg(self.angle)
        k = self.scale
        if self.direct:
            return k * c, -k * s, k * s, k * c
        return k * c, k * s, k * s, -k * c

    def __call__(self, p: Point) -> Point:
        m00, m01, m10, m11 = self.matrix()
        tx, ty = self.translation
        return Point(m00 * p.x + m01 * p.y + tx, m10 * p.x + m11 * p.y + ty)

    def __matmul__(self, other: Similarity) -> Similarity:
        return compose(self, other)


# -- constructors -----------------------------------------------------------------


def identity() -> Similarity:
    return Similarity()


def translation(v: Point) -> Similarity:
    return Similarity(Kind.DIRECT, 1.0, 0.0, (v.x, v.y))


def _fixing(kind: Kind, scale: float, angle: float, c: Point) -> Similarity:
    """The similarity with the given linear part that fixes ``c``."""
    lin = Similarity(kind, scale, angle)
    mc = lin(c)
    return Similarity(kind, scale, angle, (c.x - mc.x, c.y - mc.y))


def stretch(c: Point, r: float) -> Similarity:
    if not r > 0:
        raise InvalidRatio(f"stretch ratio must be positive, got {r!r}")
    return _fixing(Kind.DIRECT, r, 0.0, c)


def rotation(c: Point, theta: float) -> Similarity:
    return _fixing(Kind.DIRECT, 1.0, theta, c)


def halfturn(c: Point) -> Similarity:
    return rotation(c, 180.0)


def dilation(c: Point, r: float, with_halfturn: bool) -> Similarity:
    if not r > 0:
        raise InvalidRatio(f"dilation ratio must be positive, got {r!r}")
    return _fixing(Kind.DIRECT, r, 180.0 if with_halfturn else 0.0, c)


def reflection(m: Line) -> Similarity:
    # axis direction is the normal turned by 90 degrees; the map's angle is twice that
    axis_deg = math.degrees(math.atan2(m.b, m.a)) + 90.0
    return _fixing(Kind.INDIRECT, 1.0, 2.0 * axis_deg, m.foot())


# -- algebra ------------------------------------------------------------------


def apply(alpha: Similarity, p: Point) -> Point:
    return alpha(p)


def apply_line(alpha: Similarity, l: Line, tol: Tolerances = DEFAULT_TOL) -> Line:
    p0 = l.foot()
    # sample points spaced like the line's distance from the origin keep the
    # rejoined direction accurate for far-away lines
    step = max(1.0, abs(l.c))
    return gc.line_through(alpha(p0), alpha(p0 + l.direction * step), tol)


def compose(alpha: Similarity, beta: Similarity) -> Similarity:
    """``alpha`` after ``beta``."""
    if alpha.direct and beta.direct:
        kind, ang = Kind.DIRECT, alpha.angle + beta.angle
    elif alpha.direct:
        kind, ang = Kind.INDIRECT, alpha.angle + beta.angle
    elif beta.direct:
        kind, ang = Kind.INDIRECT, alpha.angle - beta.angle
    else:
        kind, ang = Kind.DIRECT, alpha.angle - beta.angle
    tb = Point(*beta.translation)
    t = alpha(tb)
    return Similarity(kind, alpha.scale * beta.scale, ang, (t.x, t.y))


def inverse(alpha: Similarity) -> Similarity:
    ang = -alpha.angle if alpha.direct else alpha.angle
    lin = Similarity(alpha.kind, 1.0 / alpha.scale, ang)
    t = lin(Point(*alpha.translation))
    return Similarity(alpha.kind, 1.0 / alpha.scale, ang, (-t.x, -t.y))


def ratio(alpha: Similarity) -> float:
    return alpha.scale


def is_isometry(alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> bool:
    return abs(alpha.scale - 1.0) <= tol.eps_ratio


def is_dilatation(alpha: Similarity) -> bool:
    return alpha.direct and (angles_close(alpha.angle, 0.0) or angles_close(alpha.angle, 180.0))


def approx_equal(alpha: Similarity, beta: Similarity, rel: float = 1e-9) -> bool:
    """Compare linear parts and translations with a relative tolerance."""
    ma, mb = alpha.matrix(), beta.matrix()
    k = max(alpha.scale, beta.scale)
    if any(abs(x - y) > rel * k for x, y in zip(ma, mb)):
        return False
    ta, tb = alpha.translation, beta.translation
    ts = max(1.0, *map(abs, ta), *map(abs, tb))
    return all(abs(x - y) <= rel * ts for x, y in zip(ta, tb))


def from_correspondence(t1: Triangle, t2: Triangle, tol: Tolerances = DEFAULT_TOL) -> Similarity:
    """The similarity carrying the vertices of ``t1`` onto those of ``t2`` in order."""
    o1 = gc.orientation(*t1, tol)
    o2 = gc.orientation(*t2, tol)
    if o1 == 0 or o2 == 0:
        raise DegenerateTriangle("correspondence triangles must be non-degenerate")
    p, q, r = t1
    p2, q2, r2 = t2
    ratios = [
        gc.distance(p2, q2) / gc.distance(p, q),
        gc.distance(q2, r2) / gc.distance(q, r),
        gc.distance(p2, r2) / gc.distance(p, r),
    ]
    mean = sum(ratios) / 3.0
    if max(ratios) - min(ratios) > tol.eps_ratio * mean:
        raise NotSimilar(f"side ratios disagree: {ratios}")

    u = complex(q.x - p.x, q.y - p.y)
    v = complex(q2.x - p2.x, q2.y - p2.y)
    kind = Kind.DIRECT if o1 == o2 else Kind.INDIRECT
    a = v / u if kind is Kind.DIRECT else v / u.conjugate()
    lin = Similarity(kind, abs(a), math.degrees(math.atan2(a.imag, a.real)))
    mp = lin(p)
    alpha = Similarity(kind, lin.scale, lin.angle, (p2.x - mp.x, p2.y - mp.y))

    miss = gc.distance(alpha(r), r2)
    if miss > tol.eps_ratio * max(t2.diameter(), 1e-300):
        raise NotSimilar(f"third vertex misses its image by {miss:.3g}")
    return alpha


# -- fixed point oracle ---------------------------------------------------------


class Method(str, enum.Enum):
    ALGEBRAIC = "algebraic"
    DILATION = "dilation_construction"
    THEOREM = "theorem_parallels"
    ALGORITHM1 = "algorithm1"


@dataclass(frozen=True)
class FixedPointResult:
    point: Point
    method: Method
    trace: Optional["ConstructionTrace"] = None  # noqa: F821 (defined in construction)
    conditioning: float = math.inf
    warnings: tuple[str, ...] = ()
    refinements: int = 0

    def residual(self, alpha: Similarity) -> float:
        return gc.distance(alpha(self.point), self.point)

    def is_fixed(self, alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> bool:
        return self.residual(alpha) <= tol.eps_point * (1.0 + self.point.norm())


def fixed_point_algebraic(alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> FixedPointResult:
    """Solve ``(I - M) x = t`` by Cramer's rule."""
    m00, m01, m10, m11 = alpha.matrix()
    a00, a01, a10, a11 = 1.0 - m00, -m01, -m10, 1.0 - m11
    det = a00 * a11 - a01 * a10
    if abs(det) <= tol.eps_parallel * max(1.0, alpha.scale * alpha.scale):
        raise NoUniqueFixedPoint(f"I - M is singular (det={det:.3g})")
    tx, ty = alpha.translation
    x = (tx * a11 - a01 * ty) / det
    y = (a00 * ty - a10 * tx) / det
    return FixedPointResult(Point(x + 0.0, y + 0.0), Method.ALGEBRAIC, None, abs(det))


# -- classification ---------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    tag = "identity"

    @property
    def is_dilatation(self) -> bool:
        return True

    def build(self) -> Similarity:
        return identity()


@dataclass(frozen=True)
class Translation:
    vector: Point
    tag = "translation"

    @property
    def is_dilatation(self) -> bool:
        return True

    def build(self) -> Similarity:
        return translation(self.vector)


@dataclass(frozen=True)
class Rotation:
    center: Point
    angle: float
    tag = "rotation"

    @property
    def is_dilatation(self) -> bool:
        return angles_close(self.angle, 180.0)

    def build(self) -> Similarity:
        return rotation(self.center, self.angle)


@dataclass(frozen=True)
class Reflection:
    axis: Line
    tag = "reflection"
    is_dilatation = False

    def build(self) -> Similarity:
        return reflection(self.axis)


@dataclass(frozen=True)
class GlideReflection:
    axis: Line
    vector: Point
    tag = "glide_reflection"
    is_dilatation = False

    def build(self) -> Similarity:
        return compose(translation(self.vector), reflection(self.axis))


@dataclass(frozen=True)
class Stretch:
    center: Point
    ratio: float
    tag = "stretch"
    is_dilatation = True

    def build(self) -> Similarity:
        return stretch(self.center, self.ratio)


@dataclass(frozen=True)
class StretchRotation:
    center: Point
    ratio: float
    angle: float

    tag = "stretch_rotation"

    @property
    def is_dilatation(self) -> bool:
        return angles_close(self.angle, 180.0)

    def build(self) -> Similarity:
        return compose(rotation(self.center, self.angle), stretch(self.center, self.ratio))


@dataclass(frozen=True)
class StretchReflection:
    center: Point
    ratio: float
    axis: Line
    tag = "stretch_reflection"
    is_dilatation = False

    def build(self) -> Similarity:
        return compose(reflection(self.axis), stretch(self.center, self.ratio))


SimilarityClass = Union[
    Identity,
    Translation,
    Rotation,
    Reflection,
    GlideReflection,
    Stretch,
    StretchRotation,
    StretchReflection,
]


def classify(alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> SimilarityClass:
    if alpha.direct:
        if is_isometry(alpha, tol):
            if angles_close(alpha.angle, 0.0):
                v = Point(*alpha.translation)
                if v.norm() <= tol.eps_point:
                    return Identity()
                return Translation(v)
            c = fixed_point_algebraic(alpha, tol).point
            return Rotation(c, alpha.angle)
        c = fixed_point_algebraic(alpha, tol).point
        if angles_close(alpha.angle, 0.0):
            return Stretch(c, alpha.scale)
        return StretchRotation(c, alpha.scale, alpha.angle)

    if is_isometry(alpha, tol):
        t = Point(*alpha.translation)
        u = Point(*cos_sin_deg(alpha.angle / 2.0))
        axis = gc.line_through_direction(t * 0.5, u)
        glide = u * t.dot(u)
        # alpha∘alpha is the translation by twice the glide vector
        twice = Point(*compose(alpha, alpha).translation)
        if twice.norm() <= tol.eps_point * max(1.0, t.norm()):
            return Reflection(axis)
        return GlideReflection(axis, glide)

    from .construction import reflection_axis

    c = fixed_point_algebraic(alpha, tol).point
    return StretchReflection(c, alpha.scale, reflection_axis(alpha, c, c + Point(1.0, 0.0), tol))


def classes_close(x: SimilarityClass, y: SimilarityClass, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Same tag and every parameter within tolerance."""
    if type(x) is not type(y):
        return False
    for name in getattr(x, "__dataclass_fields__", {}):
        u, v = getattr(x, name), getattr(y, name)
        if isinstance(u, Point):
            if not gc.coincident(u, v, Tolerances(eps_point=1e-7)):
                return False
        elif isinstance(u, Line):
            if not u.approx_eq(v, Tolerances(eps_parallel=1e-7, eps_point=1e-7)):
                return False
        elif name == "angle":
            if not angles_close(u, v, 1e-6):
                return False
        elif not math.isclose(u, v, rel_tol=1e-9):
            return False
    return True


def decompose(alpha: Similarity, tol: Tolerances = DEFAULT_TOL) -> tuple[Similarity, Similarity]:
    """Split a non-isometric map into ``(stretch about C, rotation or reflection through C)``.

    ``compose(isometry_part, stretch_part)`` reproduces ``alpha``.
    """
    if is_isometry(alpha, tol):
        raise IsometryInput("decompose needs a non-isometric similarity")
    cls = classify(alpha, tol)
    xi = stretch(cls.center, cls.ratio)
    if isinstance(cls, StretchReflection):
        return xi, reflection(cls.axis)
    return xi, rotation(cls.center, getattr(cls, "angle", 0.0))
