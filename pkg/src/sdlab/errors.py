"""Exception types shared across sdlab."""


class SdlabError(Exception):
    """Base class for all library errors."""


class DimensionError(SdlabError, ValueError):
    """Shapes are incompatible with the requested operation."""


class NotHermitianError(SdlabError, ValueError):
    pass


class SingularBlockError(SdlabError, ValueError):
    """A block required to be nonsingular is (numerically) singular."""


class HypothesisViolation(SdlabError, ValueError):
    """Inputs fall outside the hypotheses under which a closed form holds."""


class ConsistencyError(SdlabError, RuntimeError):
    """Two routes to the same quantity disagreed."""
