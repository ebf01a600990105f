"""Exception hierarchy shared by all modules."""


class GaleForgeError(Exception):
    """Base class for every error raised by this package."""


class GeometryError(GaleForgeError, ValueError):
    """A geometric precondition failed (degenerate triangle, too few points)."""


class DiagramError(GaleForgeError, ValueError):
    """Malformed diagram input: counts, labels, unknown vertices."""


class DegenerateDiagramError(DiagramError):
    """The diagram's points do not affinely span the plane."""


class NotATDiagramError(DiagramError):
    """An operation that needs a t-diagram received something else."""


class TreeError(GaleForgeError, ValueError):
    """Malformed 3-tree or tree text."""


class LatticeError(GaleForgeError, ValueError):
    """A face lattice lacks the structure an operation relies on."""


class NotAPolytopeError(GaleForgeError, ValueError):
    """No strictly positive dependence exists: not a polytope diagram."""


class ConsistencyError(GaleForgeError, RuntimeError):
    """An internal cross-check failed.  This indicates a bug, not bad input."""
