"""Two-sided missing-person registry with face-embedding cross-matching."""

from .config import ServiceConfig, load_config
from .matching import Contact, Disposition, MatchResult, Submission, SubmissionOutcome
from .registry import Entry, EntryStatus, EntryStore, Side, UploaderInfo
from .service import RegistryService

__all__ = [
    "ServiceConfig",
    "load_config",
    "Contact",
    "Disposition",
    "MatchResult",
    "Submission",
    "SubmissionOutcome",
    "Entry",
    "EntryStatus",
    "EntryStore",
    "Side",
    "UploaderInfo",
    "RegistryService",
]
