"""Exact-arithmetic reference used by the tests.

Independent of simfix: the linear part is rebuilt here from (kind, scale,
angle) with its own trigonometry, converted to Fractions, and every solve or
intersection below is carried out exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction as F

_QUARTER = {0: (1, 0), 90: (0, 1), 180: (-1, 0), 270: (0, -1)}


def linear_part(kind: str, scale: float, angle_deg: float):
    a = angle_deg % 360.0
    if a in _QUARTER:
        c, s = _QUARTER[a]
    else:
        c, s = math.cos(a * math.pi / 180.0), math.sin(a * math.pi / 180.0)
    c, s, k = F(c), F(s), F(scale)
    if kind == "direct":
        return k * c, -k * s, k * s, k * c
    return k * c, k * s, k * s, -k * c


def apply(kind, scale, angle_deg, t, p):
    m00, m01, m10, m11 = linear_part(kind, scale, angle_deg)
    x, y = (F(v) for v in p)
    return m00 * x + m01 * y + F(t[0]), m10 * x + m11 * y + F(t[1])


def fixed_point(kind, scale, angle_deg, t):
    """Exact solution of (I - M) x = t."""
    m00, m01, m10, m11 = linear_part(kind, scale, angle_deg)
    a, b, c, d = 1 - m00, -m01, -m10, 1 - m11
    det = a * d - b * c
    tx, ty = F(t[0]), F(t[1])
    return (d * tx - b * ty) / det, (a * ty - c * tx) / det


def join(p, q):
    """Line through two points as exact (a, b, c) with a x + b y = c (not normalized)."""
    (px, py), (qx, qy) = p, q
    a, b = F(qy) - F(py), F(px) - F(qx)
    return a, b, a * F(px) + b * F(py)


def parallel(line, p):
    a, b, _ = line
    px, py = p
    return a, b, a * F(px) + b * F(py)


def meet(l1, l2):
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    return (c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det


def algorithm1_crossings(P, Q, R, P2, Q2, R2):
    """D, E, F, G and C of the two-pass construction, exactly."""
    m, m2 = join(P, Q), join(P2, Q2)
    D = meet(m, m2)
    E = meet(parallel(m, R), parallel(m2, R2))
    k, k2 = join(R, Q), join(R2, Q2)
    Fp = meet(k, k2)
    G = meet(parallel(k, P), parallel(k2, P2))
    C = meet(join(D, E), join(Fp, G))
    return {"D": D, "E": E, "F": Fp, "G": G, "C": C}


def rel_error(p, exact) -> float:
    """|p - exact| / (1 + |exact|) evaluated in floating point after exact subtraction."""
    px, py = p
    dx, dy = F(px) - exact[0], F(py) - exact[1]
    err = math.hypot(float(dx), float(dy))
    return err / (1.0 + math.hypot(float(exact[0]), float(exact[1])))
