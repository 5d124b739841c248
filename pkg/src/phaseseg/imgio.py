"""PNG/JPEG decoding, mask ingestion, and label-map rendering.

Grayscale conversion is the luma weighting

    Y = 0.2125 * R + 0.7154 * G + 0.0721 * B

on channels normalized to [0, 1]; the coefficients sum to 1 so Y stays in
range (clamped against rounding regardless).

Masks are single-channel PNGs with the sentinels 0 background, 1 foreground,
255 void.  Paletted masks collapse at ingestion: index 255 is void, any other
nonzero index is foreground.

Label maps render through LABEL_PALETTE below; the palette is part of the
format, and rendering round-trips losslessly.
"""

from __future__ import annotations

from io import BytesIO

import numpy as np
from PIL import Image, UnidentifiedImageError

GRAY_WEIGHTS = (0.2125, 0.7154, 0.0721)

# label -> display color; 8 visually distinct values, 0 black, 7 white
LABEL_PALETTE = (
    (0, 0, 0),
    (230, 25, 75),
    (60, 180, 75),
    (255, 225, 25),
    (0, 130, 200),
    (245, 130, 48),
    (145, 30, 180),
    (255, 255, 255),
)

VOID = 255

_SUPPORTED_FORMATS = {"png": "PNG", "jpeg": "JPEG", "jpg": "JPEG"}


class DecodeError(ValueError):
    """Raised for malformed or unsupported image bytes."""


class MaskFormatError(ValueError):
    """Raised when mask pixels fall outside the sentinel set."""


def _open(data: bytes) -> Image.Image:
    try:
        image = Image.open(BytesIO(data))
        image.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"cannot decode image: {exc}") from exc
    return image


def decode_image(data: bytes, format: str | None = None) -> np.ndarray:
    """Decode PNG or JPEG bytes to an (H, W, 3) uint8 array.

    Grayscale and paletted sources are expanded to RGB.  A format hint, when
    given, must match the actual container.
    """
    image = _open(data)
    actual = (image.format or "").upper()
    if actual not in ("PNG", "JPEG"):
        raise DecodeError(f"unsupported container {actual or 'unknown'}; expected PNG or JPEG")
    if format is not None:
        expected = _SUPPORTED_FORMATS.get(format.lower())
        if expected is None:
            raise DecodeError(f"unknown format hint {format!r}")
        if actual != expected:
            raise DecodeError(f"format hint {format!r} does not match container {actual}")
    rgb = image.convert("RGB")
    arr = np.asarray(rgb, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DecodeError(f"decoded to unexpected shape {arr.shape}")
    return arr


def encode_png(image: np.ndarray) -> bytes:
    """(H, W, 3) uint8 array to PNG bytes."""
    arr = np.asarray(image, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {arr.shape}")
    buf = BytesIO()
    Image.fromarray(arr, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def to_gray(image: np.ndarray) -> np.ndarray:
    """Luma-weighted grayscale in [0, 1] from an (H, W, 3) 8-bit image."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {arr.shape}")
    scaled = arr.astype(np.float64) / 255.0
    # explicit left-to-right sum keeps white at exactly 1.0
    gray = (
        scaled[:, :, 0] * GRAY_WEIGHTS[0]
        + scaled[:, :, 1] * GRAY_WEIGHTS[1]
        + scaled[:, :, 2] * GRAY_WEIGHTS[2]
    )
    return np.clip(gray, 0.0, 1.0)


def load_mask(data: bytes) -> np.ndarray:
    """Ground-truth mask bytes to an (H, W) uint8 array over {0, 1, 255}."""
    image = _open(data)
    if image.mode == "P":
        indices = np.asarray(image, dtype=np.uint8)
        out = np.where(indices == VOID, VOID, (indices != 0).astype(np.uint8))
        return out.astype(np.uint8)
    if image.mode in ("L", "1"):
        arr = np.asarray(image.convert("L"), dtype=np.uint8)
        bad = np.setdiff1d(np.unique(arr), [0, 1, VOID])
        if bad.size:
            raise MaskFormatError(f"mask contains non-sentinel values {bad.tolist()}")
        return arr
    raise MaskFormatError(f"mask must be single-channel or paletted, got mode {image.mode}")


def encode_mask(mask: np.ndarray) -> bytes:
    """(H, W) sentinel mask to single-channel PNG bytes."""
    arr = np.asarray(mask, dtype=np.uint8)
    bad = np.setdiff1d(np.unique(arr), [0, 1, VOID])
    if bad.size:
        raise MaskFormatError(f"mask contains non-sentinel values {bad.tolist()}")
    buf = BytesIO()
    Image.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def render_labelmap(labels: np.ndarray) -> bytes:
    """Label map to a paletted PNG using LABEL_PALETTE."""
    arr = np.asarray(labels)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected non-empty (H, W) label map, got shape {arr.shape}")
    if arr.min() < 0 or arr.max() > 7:
        raise ValueError("labels must lie in 0..7")
    image = Image.fromarray(arr.astype(np.uint8), mode="P")
    flat = [c for rgb in LABEL_PALETTE for c in rgb]
    image.putpalette(flat + [0] * (768 - len(flat)))
    buf = BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()


def labelmap_from_png(data: bytes) -> np.ndarray:
    """Inverse of render_labelmap; also accepts RGB renders of the palette."""
    image = _open(data)
    if image.mode == "P":
        palette = image.getpalette() or []
        expected = [c for rgb in LABEL_PALETTE for c in rgb]
        if palette[: len(expected)] != expected:
            raise DecodeError("paletted PNG does not use the label palette")
        arr = np.asarray(image, dtype=np.uint8)
        if arr.max() > 7:
            raise DecodeError("palette index out of label range")
        return arr
    rgb = np.asarray(image.convert("RGB"), dtype=np.uint8)
    lut = {color: index for index, color in enumerate(LABEL_PALETTE)}
    flat = rgb.reshape(-1, 3)
    labels = np.empty(flat.shape[0], dtype=np.uint8)
    for i, px in enumerate(map(tuple, flat)):
        if px not in lut:
            raise DecodeError(f"color {px} is not in the label palette")
        labels[i] = lut[px]
    return labels.reshape(rgb.shape[:2])
