"""Exception hierarchy shared across the registry service."""


class ReuniteError(Exception):
    """Base class for all service-level errors."""


# --- image / embedding ---

class UndecodableImage(ReuniteError):
    """Photo payload cannot be parsed per its declared format."""


class NoRecognizableFace(ReuniteError):
    """Photo does not contain exactly one detectable face."""


class ProviderFailure(ReuniteError):
    """Embedding provider cannot encode the image."""


class DimensionMismatch(ReuniteError):
    """Vectors of different lengths were compared."""


# --- registry / storage ---

class DuplicateId(ReuniteError):
    """Entry id already present in the store."""


class StorageFailure(ReuniteError):
    """Underlying event log or blob store failed."""


class UnknownEntry(ReuniteError):
    """No entry with the given id."""


class IllegalTransition(ReuniteError):
    """Requested status change violates the entry lifecycle."""


class SameDirectoryLink(ReuniteError):
    """Attempted to link two entries from the same directory."""


# --- verification ---

class RegistryUnavailable(ReuniteError):
    """Citizen or police-station registry fixture could not be read."""


class InvalidStation(ReuniteError):
    """Police station id is not present in the station registry."""


class UnknownCase(ReuniteError):
    """No verification case with the given id."""


class AlreadyDecided(ReuniteError):
    """Verification case has already been approved or denied."""


# --- notification ---

class UnknownStation(ReuniteError):
    """Station email lookup failed while addressing a notification."""


class OutboxFailure(ReuniteError):
    """Outbox log append or read failed."""


# --- configuration ---

class ConfigError(ReuniteError):
    """Invalid or missing configuration."""
