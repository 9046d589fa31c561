"""Embedding providers: deterministic synthetic default plus an HTTP bridge.

The synthetic provider gives every identity label a fixed random unit
vector in D dimensions and every (identity, variant, noise_seed) triple a
small deterministic perturbation of it, so same-identity images land
within 0.30 of each other while independent identities sit near sqrt(2).
"""
from __future__ import annotations

import hashlib
from typing import Protocol, runtime_checkable

import numpy as np

from ..errors import NoRecognizableFace, ProviderFailure
from .images import FaceImage, ImageFormat, detect_face, parse_synthetic
from .vectors import DEFAULT_DIM, as_vector

# Pinned seed for the shipped fixtures and test corpus.
DEFAULT_PROVIDER_SEED = 2021

# Max perturbation norm: intra-identity distance <= 2 * 0.15 = 0.30,
# a 2x margin below the default tau of 0.6.
MAX_PERTURBATION = 0.15


@runtime_checkable
class EmbeddingProvider(Protocol):
    dim: int

    def encode(self, image: FaceImage) -> np.ndarray: ...


def _keyed_rng(*parts) -> np.random.Generator:
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def synthetic_embed(
    identity_label: str,
    variant: str,
    noise_seed: int,
    *,
    dim: int = DEFAULT_DIM,
    provider_seed: int = DEFAULT_PROVIDER_SEED,
) -> np.ndarray:
    """Deterministic embedding: unit base vector per identity plus a
    perturbation of norm <= MAX_PERTURBATION keyed by (identity, variant, seed)."""
    if not identity_label:
        raise ValueError("identity_label must be non-empty")
    base_rng = _keyed_rng(provider_seed, "identity", identity_label)
    base = base_rng.standard_normal(dim)
    base /= np.linalg.norm(base)

    pert_rng = _keyed_rng(provider_seed, "perturb", identity_label, variant, noise_seed)
    direction = pert_rng.standard_normal(dim)
    direction /= np.linalg.norm(direction)
    radius = MAX_PERTURBATION * pert_rng.random()
    return base + radius * direction


class SyntheticProvider:
    """Default hermetic provider; encodes only SYNTHETIC images."""

    def __init__(self, dim: int = DEFAULT_DIM, seed: int = DEFAULT_PROVIDER_SEED):
        self.dim = dim
        self.seed = seed

    def encode(self, image: FaceImage) -> np.ndarray:
        if image.format is not ImageFormat.SYNTHETIC:
            raise ProviderFailure(
                "synthetic provider cannot encode raster images; configure the "
                "HTTP provider for JPEG/PNG"
            )
        face = parse_synthetic(image)
        return synthetic_embed(
            face.identity_label,
            face.variant,
            face.noise_seed,
            dim=self.dim,
            provider_seed=self.seed,
        )


class HttpProvider:
    """Bridge to an out-of-process model server.

    POSTs the raw image bytes and expects a JSON body {"embedding": [...]}.
    """

    def __init__(self, url: str, dim: int = DEFAULT_DIM, timeout: float = 10.0):
        self.url = url
        self.dim = dim
        self.timeout = timeout

    def encode(self, image: FaceImage) -> np.ndarray:
        import httpx

        try:
            resp = httpx.post(
                self.url,
                content=image.payload,
                headers={"content-type": "application/octet-stream",
                         "x-image-format": image.format.value},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            body = resp.json()
        except Exception as exc:
            raise ProviderFailure(f"embedding server at {self.url} failed: {exc}") from exc
        return as_vector(body["embedding"], dim=self.dim)


def encode_face(image: FaceImage, provider: EmbeddingProvider) -> np.ndarray:
    """Encode a recognizable photo: exactly one detected face required."""
    detection = detect_face(image)
    if detection.face_count != 1:
        raise NoRecognizableFace(
            f"photo must contain exactly one face, found {detection.face_count}"
        )
    return as_vector(provider.encode(image), dim=provider.dim)
