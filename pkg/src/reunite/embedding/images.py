"""Face image container, synthetic payload format, and face detection."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass
from enum import Enum

from ..errors import UndecodableImage


class ImageFormat(str, Enum):
    SYNTHETIC = "SYNTHETIC"
    JPEG = "JPEG"
    PNG = "PNG"


@dataclass(frozen=True)
class FaceImage:
    """Opaque photo bytes plus the format they must decode as."""

    payload: bytes
    format: ImageFormat


@dataclass(frozen=True)
class SyntheticFace:
    """Parsed form of a SYNTHETIC payload: one labeled face per image."""

    identity_label: str
    variant: str
    noise_seed: int


@dataclass(frozen=True)
class FaceDetection:
    face_count: int


def synthetic_payload(identity_label: str, variant: str, noise_seed: int) -> bytes:
    """Canonical JSON payload for a synthetic face image."""
    return json.dumps(
        {"identity_label": identity_label, "variant": variant, "noise_seed": noise_seed},
        sort_keys=True,
    ).encode("utf-8")


def synthetic_image(identity_label: str, variant: str, noise_seed: int) -> FaceImage:
    return FaceImage(
        payload=synthetic_payload(identity_label, variant, noise_seed),
        format=ImageFormat.SYNTHETIC,
    )


def parse_synthetic(image: FaceImage) -> SyntheticFace:
    """Parse a SYNTHETIC payload, raising UndecodableImage on any violation."""
    if image.format is not ImageFormat.SYNTHETIC:
        raise UndecodableImage(f"not a SYNTHETIC image: {image.format}")
    try:
        obj = json.loads(image.payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UndecodableImage(f"synthetic payload is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"identity_label", "variant", "noise_seed"}:
        raise UndecodableImage("synthetic payload must have exactly identity_label/variant/noise_seed")
    label, variant, seed = obj["identity_label"], obj["variant"], obj["noise_seed"]
    if not isinstance(label, str) or not label:
        raise UndecodableImage("identity_label must be a non-empty string")
    if not isinstance(variant, str):
        raise UndecodableImage("variant must be a string")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0 or seed >= 2**64:
        raise UndecodableImage("noise_seed must be an unsigned 64-bit integer")
    return SyntheticFace(identity_label=label, variant=variant, noise_seed=seed)


def _count_raster_faces(image: FaceImage) -> int:
    # Decode with Pillow first so corrupt bytes fail as UndecodableImage,
    # then count faces with OpenCV's stock frontal cascade.
    from PIL import Image

    if not image.payload:
        raise UndecodableImage("empty payload")
    try:
        with Image.open(io.BytesIO(image.payload)) as im:
            if im.format != image.format.value:
                raise UndecodableImage(
                    f"payload decodes as {im.format}, declared {image.format.value}"
                )
            im = im.convert("L")
            import numpy as np

            gray = np.asarray(im)
    except UndecodableImage:
        raise
    except Exception as exc:
        raise UndecodableImage(f"cannot decode {image.format.value} payload: {exc}") from exc

    return _run_raster_detector(gray)


def _haar_cascade_path() -> str | None:
    try:
        import cv2

        if not hasattr(cv2, "CascadeClassifier"):
            return None
        path = cv2.data.haarcascades + "haarcascade_frontalface_default.xml"
        import os

        return path if os.path.exists(path) else None
    except ImportError:
        return None


def _yunet_model_path() -> str | None:
    import os

    path = os.environ.get("REUNITE_FACE_MODEL")
    return path if path and os.path.exists(path) else None


def raster_detector_available() -> bool:
    return _haar_cascade_path() is not None or _yunet_model_path() is not None


def _run_raster_detector(gray) -> int:
    import cv2

    cascade_path = _haar_cascade_path()
    if cascade_path is not None:
        cascade = cv2.CascadeClassifier(cascade_path)
        faces = cascade.detectMultiScale(gray, scaleFactor=1.1, minNeighbors=5)
        return len(faces)
    model_path = _yunet_model_path()
    if model_path is not None:
        h, w = gray.shape
        detector = cv2.FaceDetectorYN_create(model_path, "", (w, h))
        bgr = cv2.cvtColor(gray, cv2.COLOR_GRAY2BGR)
        _, faces = detector.detect(bgr)
        return 0 if faces is None else len(faces)
    from ..errors import ProviderFailure

    raise ProviderFailure(
        "no raster face detector available: install an OpenCV build with "
        "haar cascades or set REUNITE_FACE_MODEL to a YuNet ONNX model"
    )


def detect_face(image: FaceImage) -> FaceDetection:
    """Count detectable faces; a photo is "recognizable" iff the count is 1.

    Synthetic images encode exactly one face by construction, so detection
    reduces to validating the payload.
    """
    if not image.payload:
        raise UndecodableImage("empty payload")
    if image.format is ImageFormat.SYNTHETIC:
        parse_synthetic(image)
        return FaceDetection(face_count=1)
    return FaceDetection(face_count=_count_raster_faces(image))
