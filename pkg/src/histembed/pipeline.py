"""End-to-end compression run: image -> blocks -> histogram -> state -> image."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import qbackend
from .bixelize import BlockDecomposition, decompose
from .errors import InvalidParameter
from .histencode import AmplitudeVector, BinnedHistogram, build_histogram, to_amplitudes
from .image_io import ImageTensor, pad_to_grid
from .metrics import FidelityReport, mse, psnr, tvd
from .qbackend import QuantumState, ShotRecord
from .reconstruct import RECON_MODES, ReconstructionResult, reconstruct_image

BACKENDS = ("ideal", "sampled")
BIN_RANGES = ("data", "full")


@dataclass(frozen=True, eq=False)
class CompressionRun:
    bins: int
    decomp: BlockDecomposition
    hist: BinnedHistogram
    amplitudes: AmplitudeVector
    state: QuantumState
    probabilities: np.ndarray
    shots: ShotRecord | None
    estimated_counts: np.ndarray
    result: ReconstructionResult
    fidelity: FidelityReport

    @property
    def qubits(self) -> int:
        return self.state.qubits

    @property
    def mse_bound(self) -> float:
        """Worst-case MSE implied by the bin half-width."""
        return self.hist.half_width**2

    @property
    def within_bound(self) -> bool:
        # slack for the float rounding in edges and centers
        bound = self.mse_bound
        return self.fidelity.mse <= bound * (1 + 1e-9) + 1e-18


def prepare(img: ImageTensor, bixel_h: int = 32, bixel_w: int = 32) -> BlockDecomposition:
    padded, pad = pad_to_grid(img, bixel_h, bixel_w)
    return decompose(padded, bixel_h, bixel_w, pad)


def run(
    img: ImageTensor,
    decomp: BlockDecomposition,
    bins: int = 32,
    *,
    backend: str = "sampled",
    shots: int = qbackend.DEFAULT_SHOTS,
    seed: int = 0,
    bin_range: str = "data",
    recon: str = "paper",
) -> CompressionRun:
    """Compress ``img`` (already decomposed as ``decomp``) and reconstruct it."""
    if backend not in BACKENDS:
        raise InvalidParameter(f"backend must be one of {BACKENDS}, got {backend!r}")
    if bin_range not in BIN_RANGES:
        raise InvalidParameter(f"bin range must be one of {BIN_RANGES}, got {bin_range!r}")
    if recon not in RECON_MODES:
        raise InvalidParameter(f"recon mode must be one of {RECON_MODES}, got {recon!r}")

    value_range = (0.0, float(decomp.block_length)) if bin_range == "full" else None
    hist = build_histogram(decomp.sums, bins, value_range)
    n_blocks = decomp.n_blocks

    t0 = time.perf_counter()
    amps = to_amplitudes(hist)
    state = qbackend.embed(amps)
    probs = qbackend.ideal_probabilities(state)
    record = None
    if backend == "sampled":
        record = qbackend.sample(state, shots, seed)
        estimated = qbackend.estimate_histogram(record, n_blocks)
    else:
        estimated = probs * n_blocks
    embed_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    result = reconstruct_image(decomp, hist, estimated if recon == "measured" else None)
    recon_s = time.perf_counter() - t0

    err = mse(img, result.image)
    fidelity = FidelityReport(
        mse=err,
        psnr_db=psnr(err),
        tvd=tvd(record.frequencies(), probs) if record is not None else None,
        clip_count=result.clip_count,
        timings={"embed_s": embed_s, "recon_s": recon_s},
    )
    return CompressionRun(
        bins=hist.bins,
        decomp=decomp,
        hist=hist,
        amplitudes=amps,
        state=state,
        probabilities=probs,
        shots=record,
        estimated_counts=estimated,
        result=result,
        fidelity=fidelity,
    )
