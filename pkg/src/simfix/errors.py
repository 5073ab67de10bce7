"""Exception types raised by the geometry, similarity and construction layers."""


class GeometryError(ValueError):
    """Base class for every error raised by simfix."""


class DegenerateInput(GeometryError):
    """Arguments coincide or otherwise fail a non-degeneracy precondition."""


class CoincidentPoints(DegenerateInput):
    """Two points that must be distinct coincide within tolerance."""


class DegenerateTriangle(DegenerateInput):
    """A triangle has (near) zero area."""


class ParallelLines(GeometryError):
    """Two lines expected to cross are parallel within tolerance."""


class InvalidRatio(GeometryError):
    pass


class NotSimilar(GeometryError):
    """Two triangles are not related by a plane similarity."""


class NoUniqueFixedPoint(GeometryError):
    """The map has no fixed point, or a whole line/plane of them."""


class IsometryInput(GeometryError):
    """A non-isometric similarity was required."""


class IsDilatation(GeometryError):
    """The map sends every line to a parallel; use the dilation construction."""


class NotADilation(GeometryError):
    pass


class IdentityInput(GeometryError):
    pass


class DegenerateSelection(GeometryError):
    """No candidate line produced admissible witness triangles."""


class ConstructionFailed(GeometryError):
    """Every construction route failed; ``diagnostics`` holds per-attempt notes."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])


class LineThroughCenter(GeometryError):
    pass


class ParallelImage(GeometryError):
    pass


class NotIndirect(GeometryError):
    pass


class NotDirect(GeometryError):
    pass


class DegenerateProbe(GeometryError):
    """A probe point coincides with the fixed point."""
