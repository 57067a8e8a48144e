"""Exception hierarchy shared by every module."""


class GrassmannianError(Exception):
    """Base class for all errors raised by this package."""


class OffManifold(GrassmannianError):
    pass


class NoConvergence(GrassmannianError):
    pass


class TooFewSamples(GrassmannianError):
    pass


class SelfIntersection(GrassmannianError):
    pass


class NotBijective(GrassmannianError):
    pass


class DegenerateReach(GrassmannianError):
    pass


class OutsideTube(GrassmannianError):
    pass


class AmbiguousProjection(GrassmannianError):
    """Two distinct nearest-point candidates at (numerically) equal distance."""


class NotDiffeomorphism(GrassmannianError):
    pass


class NotEmbedding(GrassmannianError):
    pass


class OrientationMismatch(GrassmannianError):
    pass


class SourceMismatch(GrassmannianError):
    pass


class TubeCollapse(GrassmannianError):
    pass


class TrackingFailure(GrassmannianError):
    pass


class NoPathFound(GrassmannianError):
    pass


class ConfigInvalid(GrassmannianError):
    """Invalid scenario configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
