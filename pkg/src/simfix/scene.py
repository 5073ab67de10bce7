"""Scene files: a similarity given explicitly or by a triangle correspondence.

A scene is a JSON object with exactly one of::

    {"similarity": {"kind": "direct", "scale": 2, "angle_deg": 90, "translation": [4, 0]}}
    {"correspondence": {"P": [0, 0], "Q": [4, 0], "R": [4, 2],
                        "P'": [4, 0], "Q'": [4, 8], "R'": [0, 8]}}

plus optional ``"witness": {"P": .., "Q": .., "R": ..}`` (source vertices for
the two-pass construction; images are computed) and ``"tolerances": {"eps_point": ..}``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional, Union

from . import similarity as sim
from .construction import WitnessTriangles
from .geom_core import DEFAULT_TOL, Point, Tolerances, Triangle
from .similarity import Similarity

_VERTICES = ("P", "Q", "R")
_IMAGES = ("P'", "Q'", "R'")
_SIM_KEYS = {"kind", "scale", "angle_deg", "translation"}
_TOP_KEYS = {"similarity", "correspondence", "witness", "tolerances"}


class SceneError(ValueError):
    """The scene document is malformed."""


@dataclass(frozen=True)
class Scene:
    alpha: Similarity
    tol: Tolerances = DEFAULT_TOL
    witness: Optional[WitnessTriangles] = None
    correspondence: Optional[tuple[Triangle, Triangle]] = None

    @property
    def source_triangle(self) -> Optional[Triangle]:
        if self.correspondence is not None:
            return self.correspondence[0]
        return self.witness.source if self.witness is not None else None


def _number(v: Any, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SceneError(f"{what} must be a number, got {v!r}")
    x = float(v)
    if not math.isfinite(x):
        raise SceneError(f"{what} must be finite")
    return x


def _pair(v: Any, what: str) -> tuple[float, float]:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise SceneError(f"{what} must be a coordinate pair [x, y]")
    return _number(v[0], f"{what}[0]"), _number(v[1], f"{what}[1]")


def _point(v: Any, what: str) -> Point:
    return Point(*_pair(v, what))


def _object(v: Any, what: str, required: set[str], optional: frozenset = frozenset()) -> dict:
    if not isinstance(v, dict):
        raise SceneError(f"{what} must be an object")
    missing = required - set(v)
    extra = set(v) - required - optional
    if missing:
        raise SceneError(f"{what} is missing {sorted(missing)}")
    if extra:
        raise SceneError(f"{what} has unknown keys {sorted(extra)}")
    return v


def _tolerances(v: Any) -> Tolerances:
    names = {f.name for f in fields(Tolerances)}
    d = _object(v, "tolerances", set(), frozenset(names))
    try:
        return Tolerances(**{k: _number(x, k) for k, x in d.items()})
    except ValueError as exc:
        raise SceneError(str(exc)) from exc


def _similarity(v: Any) -> Similarity:
    d = _object(v, "similarity", {"kind", "scale", "angle_deg"}, frozenset({"translation"}))
    kind = d["kind"]
    if kind not in ("direct", "indirect"):
        raise SceneError(f"kind must be 'direct' or 'indirect', got {kind!r}")
    scale = _number(d["scale"], "scale")
    if scale <= 0:
        raise SceneError("scale must be positive")
    t = _pair(d.get("translation", [0, 0]), "translation")
    return Similarity(kind, scale, _number(d["angle_deg"], "angle_deg"), t)


def parse_scene(doc: Any) -> Scene:
    """Build a :class:`Scene` from a decoded JSON document.

    Raises ``SceneError`` for malformed documents and the geometry errors of
    ``from_correspondence`` for degenerate or non-similar triangles.
    """
    if not isinstance(doc, dict):
        raise SceneError("scene must be a JSON object")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise SceneError(f"unknown scene keys {sorted(extra)}")
    if ("similarity" in doc) == ("correspondence" in doc):
        raise SceneError("scene needs exactly one of 'similarity' or 'correspondence'")
    tol = _tolerances(doc["tolerances"]) if "tolerances" in doc else DEFAULT_TOL

    corr = None
    witness = None
    if "similarity" in doc:
        alpha = _similarity(doc["similarity"])
    else:
        d = _object(doc["correspondence"], "correspondence", set(_VERTICES + _IMAGES))
        src = Triangle(*(_point(d[k], k) for k in _VERTICES))
        img = Triangle(*(_point(d[k], k) for k in _IMAGES))
        alpha = sim.from_correspondence(src, img, tol)
        corr = (src, img)
        witness = WitnessTriangles(src, img)

    if "witness" in doc:
        d = _object(doc["witness"], "witness", set(_VERTICES))
        witness = WitnessTriangles.from_source(alpha, *(_point(d[k], k) for k in _VERTICES))
    return Scene(alpha, tol, witness, corr)


def load_scene(path: Union[str, Path]) -> Scene:
    """Read and parse a scene file. ``SceneError`` covers unreadable or invalid JSON."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"{path}: invalid JSON ({exc})") from exc
    return parse_scene(doc)


def similarity_doc(alpha: Similarity) -> dict:
    return {
        "kind": alpha.kind.value,
        "scale": alpha.scale,
        "angle_deg": alpha.angle,
        "translation": list(alpha.translation),
    }


def dump_scene(alpha: Similarity, tol: Optional[Tolerances] = None) -> str:
    """Serialize a similarity as a scene that ``parse_scene`` reads back unchanged."""
    doc: dict = {"similarity": similarity_doc(alpha)}
    if tol is not None and tol != DEFAULT_TOL:
        doc["tolerances"] = {f.name: getattr(tol, f.name) for f in fields(Tolerances)}
    return json.dumps(doc, sort_keys=True, indent=2)
