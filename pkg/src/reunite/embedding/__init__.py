from .images import (
    FaceDetection,
    FaceImage,
    ImageFormat,
    SyntheticFace,
    detect_face,
    parse_synthetic,
    synthetic_image,
    synthetic_payload,
)
from .kernels import active_kernel, batch_distances, distances_numpy
from .provider import (
    DEFAULT_PROVIDER_SEED,
    MAX_PERTURBATION,
    EmbeddingProvider,
    HttpProvider,
    SyntheticProvider,
    encode_face,
    synthetic_embed,
)
from .vectors import DEFAULT_DIM, DEFAULT_TAU, MatchThreshold, as_vector, distance, is_match

__all__ = [
    "FaceDetection",
    "FaceImage",
    "ImageFormat",
    "SyntheticFace",
    "detect_face",
    "parse_synthetic",
    "synthetic_image",
    "synthetic_payload",
    "active_kernel",
    "batch_distances",
    "distances_numpy",
    "DEFAULT_PROVIDER_SEED",
    "MAX_PERTURBATION",
    "EmbeddingProvider",
    "HttpProvider",
    "SyntheticProvider",
    "encode_face",
    "synthetic_embed",
    "DEFAULT_DIM",
    "DEFAULT_TAU",
    "MatchThreshold",
    "as_vector",
    "distance",
    "is_match",
]
