"""Fidelity metrics and qubit accounting against pixel-based encodings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParameter
from .image_io import ImageTensor
from .qbackend import required_qubits

MAX_INTENSITY = 1.0
METHODS = ("FRQI", "NEQR", "NCQI", "PROPOSED")
NEQR_DEFAULT_DEPTH = {1: 8, 3: 24}


@dataclass
class FidelityReport:
    mse: float
    psnr_db: float
    tvd: float | None = None
    clip_count: int = 0
    timings: dict[str, float] = field(default_factory=dict)


def mse(a: ImageTensor, b: ImageTensor) -> float:
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare images of shape {a.shape} and {b.shape}")
    diff = a.data - b.data
    return float(np.mean(diff * diff))


def psnr(mse_value: float) -> float:
    """PSNR in dB with a peak of 1.0; ``inf`` for a perfect match."""
    if mse_value < 0 or math.isnan(mse_value):
        raise InvalidParameter(f"mse must be non-negative, got {mse_value}")
    if mse_value == 0:
        return math.inf
    return 10.0 * math.log10(MAX_INTENSITY**2 / mse_value)


def tvd(p, q, atol: float = 1e-9) -> float:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DimensionMismatch(f"distributions have lengths {p.shape} and {q.shape}")
    for name, v in (("p", p), ("q", q)):
        if np.any(v < 0) or abs(v.sum() - 1.0) > atol:
            raise InvalidParameter(f"{name} is not a normalized probability vector")
    return float(min(1.0, 0.5 * np.abs(p - q).sum()))


def _position_qubits(n_pixels: int) -> int:
    return (int(n_pixels) - 1).bit_length()


def qubit_accounting(
    n_pixels: int | None,
    method: str,
    *,
    bit_depth: int = 8,
    bins: int = 32,
) -> int:
    """Qubits needed to hold an ``n_pixels`` image under ``method``.

    NEQR's value register is ``bit_depth`` qubits wide. Pass 24 for
    8-bit RGB, 8 for 8-bit grayscale, or 1 for the single extra qubit
    printed in the comparison table.
    """
    method = method.upper()
    if method == "PROPOSED":
        return required_qubits(bins)
    if method not in METHODS:
        raise InvalidParameter(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if n_pixels is None or n_pixels < 1:
        raise InvalidParameter(f"pixel count must be >= 1, got {n_pixels}")
    position = _position_qubits(n_pixels)
    if method == "FRQI":
        return position + 1
    if method == "NCQI":
        return position + 2
    if bit_depth < 1:
        raise InvalidParameter(f"NEQR bit depth must be >= 1, got {bit_depth}")
    return position + bit_depth


def qubit_table(n_pixels: int, *, bins: int = 32, bit_depth: int = 8) -> dict[str, int]:
    return {
        m: qubit_accounting(n_pixels, m, bit_depth=bit_depth, bins=bins) for m in METHODS
    }
