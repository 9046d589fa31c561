"""Distance metric and threshold predicate over embedding vectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch

DEFAULT_DIM = 128
DEFAULT_TAU = 0.6


@dataclass(frozen=True)
class MatchThreshold:
    """Distance below which two embeddings count as the same person."""

    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


def as_vector(values, dim: int | None = None) -> np.ndarray:
    """Validate and normalize raw values into a float64 embedding vector."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatch(f"embedding must be 1-D, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("embedding components must all be finite")
    return v


def distance(a, b) -> float:
    """Euclidean distance between two equal-length vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_match(a, b, threshold: MatchThreshold) -> bool:
    """True iff the two embeddings are closer than the threshold."""
    return distance(a, b) < threshold.tau
