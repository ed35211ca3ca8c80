"""Exception hierarchy shared across the package.

Precondition violations on plain arguments (counts, scales, thresholds)
raise ValueError directly; the classes here name domain-level failure modes
so callers can catch them selectively.
"""


class VaselabError(Exception):
    """Base class for all domain errors."""


# ---- mesh ----------------------------------------------------------------

class MeshParseError(VaselabError):
    """Unreadable or malformed mesh file; carries line/offset context."""

    def __init__(self, message, line=None, offset=None):
        ctx = ""
        if line is not None:
            ctx = f" (line {line})"
        elif offset is not None:
            ctx = f" (byte offset {offset})"
        super().__init__(message + ctx)
        self.line = line
        self.offset = offset


class IndexOutOfRange(MeshParseError):
    """A face references a vertex index outside the vertex table."""


class EmptyMesh(VaselabError):
    """Mesh has no vertices or no triangles where content is required."""


class NotClosed(VaselabError):
    """Operation requires a watertight mesh but boundary edges exist."""


class NotRevolutionLike(VaselabError):
    """Axis fit residual too large for a surface of revolution."""


class Degenerate(VaselabError):
    """Input geometry does not constrain the requested fit (e.g. planar)."""


class AllBinsEmpty(VaselabError):
    """Profile binning produced no usable samples."""


# ---- flattening -----------------------------------------------------------

class FitDiverged(VaselabError):
    """Proxy fit failed to produce finite, meaningful parameters."""


class SeamCutFailed(VaselabError):
    """Seam cut could not resolve a consistent angular lift."""


class NonFiniteEnergy(VaselabError):
    """Relaxation encountered NaN/inf (bad initial map)."""


class EmptyMap(VaselabError):
    """Planar map has no triangles to rasterize."""


# ---- capacity -------------------------------------------------------------

class TooFewSamples(VaselabError):
    """Profile has fewer samples than the integration rule needs."""


class OffsetCollapse(VaselabError):
    """Interior offset exceeded local feature size (triangles flipped)."""


class InconsistentInputs(VaselabError):
    """Mass/density imply more ceramic than the outer hull encloses."""


# ---- voxel ----------------------------------------------------------------

class NoCavity(VaselabError):
    """No interior air remains after exterior flood fill."""


# ---- imaging / retrieval ----------------------------------------------------

class NoForeground(VaselabError):
    """Silhouette extraction found no foreground object."""


class DegenerateContour(VaselabError):
    """Contour has (near-)zero perimeter."""


class DegenerateSketch(VaselabError):
    """Sketch rasterized to nothing usable."""


class EmptyCatalog(VaselabError):
    """Index build requested over zero records."""


class KindMissing(VaselabError):
    """Index holds no entries for the requested descriptor kind."""


class TruthMismatch(VaselabError):
    """Ground-truth labels/order do not cover the ranked ids."""


# ---- catalog ----------------------------------------------------------------

class CatalogFieldError(VaselabError):
    """A record failed validation; names the record index and field."""

    def __init__(self, index, field, message):
        super().__init__(f"record {index}: field '{field}': {message}")
        self.index = index
        self.field = field


class DuplicateId(VaselabError):
    """Two catalog records share an id."""


class UnknownId(VaselabError):
    """Selector referenced an id absent from the catalog."""


# ---- service ----------------------------------------------------------------

class BindFailure(VaselabError):
    """Service could not bind its port."""


class LoadFailure(VaselabError):
    """Catalog or index failed to load at service start."""
