"""Exception hierarchy shared across the engine."""


class SceneSmithError(Exception):
    """Base class for all engine errors."""


class InvalidExtents(SceneSmithError):
    """Bounding-box extents were non-positive or non-finite."""


class IllegalTransition(SceneSmithError):
    """Placeholder lifecycle transition that skips or reverses a state."""


class SchemaViolation(SceneSmithError):
    """Structured reasoner output failed schema validation on the final attempt."""


class AllProvidersFailed(SceneSmithError):
    """Every configured reasoner provider exhausted its retries."""


class ProviderUnavailable(SceneSmithError):
    """Provider cannot answer this request at all (no fixture, declined)."""


class ProviderTransientError(SceneSmithError):
    """Provider failed in a way worth retrying (network, bad gateway)."""


class ExtractionFailed(SceneSmithError):
    """A scene description contained no extractable spatial relation."""


class Unsatisfiable(SceneSmithError):
    """Relation set contains a per-axis cycle; carries the offending cycle."""

    def __init__(self, axis: str, cycle: list[str]):
        self.axis = axis
        self.cycle = cycle
        super().__init__(f"cycle on {axis} axis: {' -> '.join(cycle + cycle[:1])}")


class MissingObject(SceneSmithError):
    """A relation endpoint is absent from the predicted positions."""


class EmptyCatalog(SceneSmithError):
    """Search issued against a catalog with no indexed entries."""


class NotFound(SceneSmithError):
    """Asset-info lookup for an unknown uid."""


class TagUnavailable(SceneSmithError):
    """Sketch parsing produced no usable tag."""


class ElevationUnavailable(SceneSmithError):
    """Elevation provider could not be reached or returned no data."""


class TargetNotFound(SceneSmithError):
    """Behavior attachment referenced an object that is not in the scene."""


class SyncError(SceneSmithError):
    """Base for session-replication protocol violations."""


class DuplicateClient(SyncError):
    """A client id tried to join a session it already joined."""


class UnknownSession(SyncError):
    """Message referenced a session id the hub does not host."""


class UnknownClient(SyncError):
    """Message sender never joined the session."""


class OwnershipViolation(SyncError):
    """Mutation attempted on an object owned by another client."""


class UnknownObject(SyncError):
    """Message referenced an object id absent from the scene."""
