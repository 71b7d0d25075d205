"""Rebuild an image from bin centers and the stored per-block weights."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bixelize import BlockDecomposition, reassemble
from .errors import DimensionMismatch, InvalidParameter
from .histencode import BinnedHistogram, bin_centers
from .image_io import ImageTensor, crop

RECON_MODES = ("paper", "measured")


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    image: ImageTensor
    reconstructed_sums: np.ndarray
    clip_count: int


def reconstruct_sums(hist: BinnedHistogram, estimated_counts=None) -> np.ndarray:
    """Per-block surrogate sum: the center of the bin each block was assigned to.

    With ``estimated_counts`` (measured mode) each center is additionally
    scaled by ``estimated / original`` count of its bin.
    """
    centers = bin_centers(hist)
    if hist.is_degenerate:
        centers = np.full(hist.bins, hist.edges[0], dtype=np.float64)
    if estimated_counts is not None:
        est = np.asarray(estimated_counts, dtype=np.float64)[: hist.bins]
        if est.shape != (hist.bins,):
            raise DimensionMismatch(f"need {hist.bins} estimated counts, got {est.shape}")
        counts = np.asarray(hist.counts, dtype=np.float64)
        scale = np.divide(est, counts, out=np.zeros_like(est), where=counts > 0)
        centers = centers * scale
    return centers[hist.assignments]


def redistribute(weights, sums, residuals=None, block_sums=None) -> tuple[np.ndarray, int]:
    """Spread each block's surrogate sum over its pixels; clamp to [0, 1].

    ``residuals`` and ``block_sums`` (from :func:`decompose`) add the
    rounding correction of the stored weights, so a surrogate equal to the
    true block sum reproduces the block bit-for-bit.

    Returns the ``(n_blocks, M)`` pixel matrix and the number of clamped values.
    """
    weights = np.asarray(weights, dtype=np.float64)
    sums = np.asarray(sums, dtype=np.float64)
    if weights.ndim != 2 or sums.shape != (weights.shape[0],):
        raise DimensionMismatch(
            f"{sums.shape} sums do not match weight matrix of shape {weights.shape}"
        )
    raw = weights * sums[:, None]
    if residuals is not None:
        residuals = np.asarray(residuals, dtype=np.float64)
        block_sums = np.asarray(block_sums, dtype=np.float64)
        if residuals.shape != weights.shape or block_sums.shape != sums.shape:
            raise DimensionMismatch("residuals/block sums do not match the weight matrix")
        ratio = np.divide(sums, block_sums, out=np.zeros_like(sums), where=block_sums > 0)
        raw = raw + residuals * ratio[:, None]
    clipped = np.clip(raw, 0.0, 1.0)
    return clipped, int(np.count_nonzero(clipped != raw))


def reconstruct_image(
    decomp: BlockDecomposition,
    hist: BinnedHistogram,
    estimated_counts=None,
) -> ReconstructionResult:
    if hist.assignments.shape != (decomp.n_blocks,):
        raise InvalidParameter("histogram was not built from this decomposition")
    sums = reconstruct_sums(hist, estimated_counts)
    if decomp.residuals is None:
        pixels, clip_count = redistribute(decomp.weights, sums)
    else:
        pixels, clip_count = redistribute(decomp.weights, sums, decomp.residuals, decomp.sums)
    padded = reassemble(decomp, pixels)
    sums.setflags(write=False)
    return ReconstructionResult(
        image=crop(padded, decomp.pad),
        reconstructed_sums=sums,
        clip_count=clip_count,
    )
