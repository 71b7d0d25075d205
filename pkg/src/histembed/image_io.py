"""Image loading, zero-padding, cropping and PNG output.

Every downstream stage works on :class:`ImageTensor`, a read-only
``(height, width, channels)`` float64 array with values in ``[0, 1]``.
Only 8-bit PNG and binary PPM/PGM (P6/P5) inputs are accepted.
"""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    CorruptImageData,
    DimensionMismatch,
    ImageFileNotFound,
    ImageWriteFailure,
    InvalidParameter,
    UnsupportedFormat,
)

log = logging.getLogger(__name__)

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
NETPBM_MAGIC = (b"P5", b"P6")
MAX_SAMPLE = 255


@dataclass(frozen=True, eq=False)
class ImageTensor:
    """Normalized image, row-major ``(row, column, channel)``."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise InvalidParameter(f"expected HxWx1 or HxWx3 data, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidParameter(f"empty image shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise InvalidParameter("pixel intensities must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    def __eq__(self, other):
        if not isinstance(other, ImageTensor):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"ImageTensor({self.height}x{self.width}x{self.channels})"


@dataclass(frozen=True)
class PadRecord:
    original_height: int
    original_width: int
    padded_height: int
    padded_width: int

    @property
    def is_identity(self) -> bool:
        return (self.original_height, self.original_width) == (
            self.padded_height,
            self.padded_width,
        )


def _check_magic(head: bytes, path) -> str:
    if head.startswith(PNG_SIGNATURE):
        return "PNG"
    if head[:2] in NETPBM_MAGIC:
        return "PPM"
    raise UnsupportedFormat(f"{path}: not a PNG or binary PPM/PGM file")


def load_image(path) -> ImageTensor:
    """Read an 8-bit PNG or binary PPM/PGM and scale samples to ``[0, 1]``.

    Grayscale stays single-channel. Alpha is dropped with a warning;
    16-bit and other high-depth inputs raise :class:`UnsupportedFormat`.
    """
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except FileNotFoundError:
        raise ImageFileNotFound(f"{path}: no such file") from None
    except IsADirectoryError:
        raise ImageFileNotFound(f"{path}: is a directory") from None

    fmt = _check_magic(raw[:8], path)
    try:
        im = Image.open(io.BytesIO(raw), formats=[fmt])
        im.load()
    except UnidentifiedImageError as exc:
        raise CorruptImageData(f"{path}: {exc}") from None
    except (OSError, ValueError, SyntaxError) as exc:
        raise CorruptImageData(f"{path}: {exc}") from None

    mode = im.mode
    if mode in ("1", "P"):
        # bilevel and palette images expand to their 8-bit equivalents
        if mode == "P":
            mode = "RGBA" if "transparency" in im.info else "RGB"
        else:
            mode = "L"
        im = im.convert(mode)
    if mode in ("LA", "RGBA"):
        log.warning("%s: alpha channel stripped", path)
        im = im.convert(mode[:-1])
    elif mode not in ("L", "RGB"):
        raise UnsupportedFormat(f"{path}: unsupported pixel mode {mode!r} (8-bit L/RGB only)")

    samples = np.asarray(im, dtype=np.uint8)
    return ImageTensor(samples.astype(np.float64) / MAX_SAMPLE)


def to_uint8(img: ImageTensor) -> np.ndarray:
    """Quantize to bytes with round-half-to-even of ``v * 255``."""
    return np.rint(img.data * MAX_SAMPLE).astype(np.uint8)


def encode_png(img: ImageTensor) -> bytes:
    """Lossless 8-bit PNG bytes; output depends only on the pixel values."""
    samples = to_uint8(img)
    pil = Image.fromarray(samples[:, :, 0] if img.channels == 1 else samples)
    buf = io.BytesIO()
    pil.save(buf, format="PNG", optimize=False, compress_level=9)
    return buf.getvalue()


def save_image(img: ImageTensor, path) -> int:
    """Write ``img`` as PNG and return the file size in bytes."""
    data = encode_png(img)
    path = os.fspath(path)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise ImageWriteFailure(f"{path}: {exc}") from None
    return os.path.getsize(path)


def pad_to_grid(img: ImageTensor, bixel_h: int, bixel_w: int) -> tuple[ImageTensor, PadRecord]:
    if bixel_h < 1 or bixel_w < 1:
        raise InvalidParameter(f"bixel dimensions must be >= 1, got {bixel_h}x{bixel_w}")
    h, w, c = img.shape
    ph = -(-h // bixel_h) * bixel_h
    pw = -(-w // bixel_w) * bixel_w
    record = PadRecord(h, w, ph, pw)
    if record.is_identity:
        return img, record
    out = np.zeros((ph, pw, c), dtype=np.float64)
    out[:h, :w, :] = img.data
    return ImageTensor(out), record


def crop(img: ImageTensor, pad: PadRecord) -> ImageTensor:
    if (img.height, img.width) != (pad.padded_height, pad.padded_width):
        raise DimensionMismatch(
            f"image is {img.height}x{img.width}, pad record expects "
            f"{pad.padded_height}x{pad.padded_width}"
        )
    if pad.is_identity:
        return img
    return ImageTensor(img.data[: pad.original_height, : pad.original_width, :])
