"""Bixel segmentation: per-block intensity sums and intra-block weights.

Blocks are enumerated row-major over the grid, and the pixels inside a
block are flattened row-major as ``(row, column, channel)``, so a block
vector has length ``M = bixel_h * bixel_w * channels``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import CorruptImageData, DimensionMismatch, InvalidParameter
from .image_io import ImageTensor, PadRecord

SIDECAR_FORMAT = "histembed-blocks/1"
FLATTEN_ORDER = "row-major(row,column,channel)"


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    bixel_h: int
    bixel_w: int
    grid_rows: int
    grid_cols: int
    channels: int
    sums: np.ndarray  # (n_blocks,)
    weights: np.ndarray  # (n_blocks, M); all-zero rows for zero-sum blocks
    pad: PadRecord
    # p - fl(w * S), exact by Sterbenz; lets w * S reproduce p bit-for-bit
    residuals: np.ndarray | None = None

    @property
    def n_blocks(self) -> int:
        return self.grid_rows * self.grid_cols

    @property
    def block_length(self) -> int:
        return self.bixel_h * self.bixel_w * self.channels


def _split_blocks(data: np.ndarray, bixel_h: int, bixel_w: int) -> np.ndarray:
    h, w, c = data.shape
    gr, gc = h // bixel_h, w // bixel_w
    blocks = data.reshape(gr, bixel_h, gc, bixel_w, c).transpose(0, 2, 1, 3, 4)
    return blocks.reshape(gr * gc, bixel_h * bixel_w * c)


def flatten_blocks(img: ImageTensor, bixel_h: int, bixel_w: int) -> np.ndarray:
    """Return the ``(n_blocks, M)`` matrix of flattened bixels."""
    if bixel_h < 1 or bixel_w < 1:
        raise InvalidParameter(f"bixel dimensions must be >= 1, got {bixel_h}x{bixel_w}")
    if img.height % bixel_h or img.width % bixel_w:
        raise DimensionMismatch(
            f"{img.height}x{img.width} image is not a multiple of {bixel_h}x{bixel_w} bixels"
        )
    return _split_blocks(img.data, bixel_h, bixel_w)


def decompose(img: ImageTensor, bixel_h: int, bixel_w: int, pad: PadRecord) -> BlockDecomposition:
    """Compute block sums and normalized weight vectors of a padded image."""
    if (img.height, img.width) != (pad.padded_height, pad.padded_width):
        raise DimensionMismatch("image dimensions disagree with its pad record")
    blocks = flatten_blocks(img, bixel_h, bixel_w)
    sums = blocks.sum(axis=1)
    weights = np.zeros_like(blocks)
    nz = sums > 0
    weights[nz] = blocks[nz] / sums[nz, None]
    residuals = blocks - weights * sums[:, None]
    for arr in (sums, weights, residuals):
        arr.setflags(write=False)
    return BlockDecomposition(
        bixel_h=bixel_h,
        bixel_w=bixel_w,
        grid_rows=img.height // bixel_h,
        grid_cols=img.width // bixel_w,
        channels=img.channels,
        sums=sums,
        weights=weights,
        pad=pad,
        residuals=residuals,
    )


def reassemble(decomp: BlockDecomposition, block_pixels) -> ImageTensor:
    """Inverse of the block enumeration: stitch block vectors into the padded image."""
    arr = np.asarray(block_pixels, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != decomp.n_blocks:
        raise DimensionMismatch(
            f"expected {decomp.n_blocks} block vectors, got array of shape {arr.shape}"
        )
    if arr.shape[1] != decomp.block_length:
        raise DimensionMismatch(
            f"block vectors must have length {decomp.block_length}, got {arr.shape[1]}"
        )
    bh, bw, c = decomp.bixel_h, decomp.bixel_w, decomp.channels
    gr, gc = decomp.grid_rows, decomp.grid_cols
    img = arr.reshape(gr, gc, bh, bw, c).transpose(0, 2, 1, 3, 4).reshape(gr * bh, gc * bw, c)
    return ImageTensor(img)


def save_decomposition(decomp: BlockDecomposition, path) -> None:
    """Write a sidecar ``.npz`` holding geometry, sums and weights."""
    pad = decomp.pad
    meta = {
        "format": SIDECAR_FORMAT,
        "flatten_order": FLATTEN_ORDER,
        "bixel": [decomp.bixel_h, decomp.bixel_w],
        "grid": [decomp.grid_rows, decomp.grid_cols],
        "channels": decomp.channels,
        "pad": [pad.original_height, pad.original_width, pad.padded_height, pad.padded_width],
    }
    with open(os.fspath(path), "wb") as fh:
        arrays = {"sums": decomp.sums, "weights": decomp.weights}
        if decomp.residuals is not None:
            arrays["residuals"] = decomp.residuals
        np.savez(fh, meta=np.array(json.dumps(meta)), **arrays)


def load_decomposition(path) -> BlockDecomposition:
    try:
        with np.load(os.fspath(path), allow_pickle=False) as npz:
            meta = json.loads(str(npz["meta"]))
            sums = np.array(npz["sums"], dtype=np.float64)
            weights = np.array(npz["weights"], dtype=np.float64)
            residuals = np.array(npz["residuals"], dtype=np.float64) if "residuals" in npz else None
    except (OSError, KeyError, ValueError) as exc:
        raise CorruptImageData(f"{path}: unreadable block sidecar ({exc})") from None
    if meta.get("format") != SIDECAR_FORMAT or meta.get("flatten_order") != FLATTEN_ORDER:
        raise CorruptImageData(f"{path}: unknown sidecar format {meta.get('format')!r}")
    bh, bw = meta["bixel"]
    gr, gc = meta["grid"]
    decomp = BlockDecomposition(
        bixel_h=bh,
        bixel_w=bw,
        grid_rows=gr,
        grid_cols=gc,
        channels=meta["channels"],
        sums=sums,
        weights=weights,
        pad=PadRecord(*meta["pad"]),
        residuals=residuals,
    )
    if residuals is not None and residuals.shape != weights.shape:
        raise CorruptImageData(f"{path}: residual array shape disagrees with weights")
    if sums.shape != (decomp.n_blocks,) or weights.shape != (decomp.n_blocks, decomp.block_length):
        raise CorruptImageData(f"{path}: array shapes disagree with stored geometry")
    return decomp
