"""Histogram-driven amplitude-embedding image compression.

Blocks ("bixels") of an image are summarized by their intensity sums, the
sums are binned into a B-bin histogram, and the square-rooted, normalized
histogram is loaded as the amplitudes of a ceil(log2 B)-qubit state on a
simulated backend. Reconstruction places every block at its bin center and
redistributes that sum with the block's stored weight vector.
"""

__version__ = "0.1.0"

from .bixelize import BlockDecomposition, decompose, reassemble
from .histencode import AmplitudeVector, BinnedHistogram, bin_center, build_histogram, to_amplitudes
from .image_io import ImageTensor, PadRecord, crop, load_image, pad_to_grid, save_image
from .metrics import FidelityReport, mse, psnr, qubit_accounting, tvd
from .pipeline import CompressionRun, prepare, run
from .qbackend import (
    QuantumState,
    ShotRecord,
    embed,
    estimate_histogram,
    ideal_probabilities,
    required_qubits,
    sample,
)
from .reconstruct import ReconstructionResult, reconstruct_image, reconstruct_sums, redistribute

__all__ = [
    "AmplitudeVector",
    "BinnedHistogram",
    "BlockDecomposition",
    "CompressionRun",
    "FidelityReport",
    "ImageTensor",
    "PadRecord",
    "QuantumState",
    "ReconstructionResult",
    "ShotRecord",
    "bin_center",
    "build_histogram",
    "crop",
    "decompose",
    "embed",
    "estimate_histogram",
    "ideal_probabilities",
    "load_image",
    "mse",
    "pad_to_grid",
    "prepare",
    "psnr",
    "qubit_accounting",
    "reassemble",
    "reconstruct_image",
    "reconstruct_sums",
    "redistribute",
    "required_qubits",
    "run",
    "sample",
    "save_image",
    "to_amplitudes",
    "tvd",
]
