"""Global histogram of block sums and its square-root amplitude vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .qbackend import required_qubits


@dataclass(frozen=True, eq=False)
class BinnedHistogram:
    bins: int
    edges: np.ndarray  # (bins + 1,), ascending
    counts: np.ndarray  # (bins,), int64
    assignments: np.ndarray  # (n_blocks,), bin index per block

    @property
    def value_range(self) -> tuple[float, float]:
        return float(self.edges[0]), float(self.edges[-1])

    @property
    def is_degenerate(self) -> bool:
        return self.edges[0] == self.edges[-1]

    @property
    def half_width(self) -> float:
        """Worst-case distance from any in-range value to its bin center."""
        lo, hi = self.value_range
        return (hi - lo) / (2 * self.bins)


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    qubits: int
    amplitudes: np.ndarray  # (2**qubits,)


def uniform_edges(lo: float, hi: float, bins: int) -> np.ndarray:
    if bins < 1:
        raise InvalidParameter(f"bin count must be >= 1, got {bins}")
    if not hi >= lo:
        raise InvalidParameter(f"empty bin range [{lo}, {hi}]")
    return np.linspace(lo, hi, bins + 1)


def assign_bins(values, edges) -> np.ndarray:
    """Bin index for each value; a value on an interior edge goes to the lower bin."""
    values = np.asarray(values, dtype=np.float64)
    edges = np.asarray(edges, dtype=np.float64)
    if values.size and (values.min() < edges[0] or values.max() > edges[-1]):
        raise InvalidParameter("values fall outside the histogram range")
    # number of interior edges strictly below v == index of the lowest bin whose
    # closed interval holds v
    return np.searchsorted(edges[1:-1], values, side="left").astype(np.int64)


def build_histogram(sums, bins: int, value_range: tuple[float, float] | None = None) -> BinnedHistogram:
    """Quantize block sums into ``bins`` uniform-width bins.

    By default the bins span the observed ``[min(sums), max(sums)]``;
    ``value_range`` overrides that extent (e.g. ``(0, M)`` for the full
    theoretical block-sum range).
    """
    sums = np.asarray(sums, dtype=np.float64).ravel()
    if sums.size == 0:
        raise InvalidParameter("cannot build a histogram from zero blocks")
    if isinstance(bins, bool) or int(bins) != bins or bins < 1:
        raise InvalidParameter(f"bin count must be an integer >= 1, got {bins!r}")
    bins = int(bins)
    lo, hi = (sums.min(), sums.max()) if value_range is None else value_range
    edges = uniform_edges(float(lo), float(hi), bins)
    assignments = assign_bins(sums, edges)
    counts = np.bincount(assignments, minlength=bins).astype(np.int64)
    for arr in (edges, counts, assignments):
        arr.setflags(write=False)
    return BinnedHistogram(bins=bins, edges=edges, counts=counts, assignments=assignments)


def to_amplitudes(hist: BinnedHistogram) -> AmplitudeVector:
    """Square-root-normalize the counts and zero-pad to a power-of-two length."""
    counts = np.asarray(hist.counts)
    total = int(counts.sum())
    if total <= 0:
        raise InvalidParameter("histogram has no counts")
    n = required_qubits(hist.bins)
    amps = np.zeros(2**n, dtype=np.float64)
    amps[: hist.bins] = np.sqrt(counts.astype(np.float64)) / np.sqrt(float(total))
    amps.setflags(write=False)
    return AmplitudeVector(qubits=n, amplitudes=amps)


def bin_center(hist: BinnedHistogram, k: int) -> float:
    if not 0 <= k < hist.bins:
        raise InvalidParameter(f"bin index {k} outside [0, {hist.bins})")
    lo, hi = hist.edges[k], hist.edges[k + 1]
    if lo == hi:
        return float(lo)
    return float((lo + hi) / 2)


def bin_centers(hist: BinnedHistogram) -> np.ndarray:
    return (hist.edges[:-1] + hist.edges[1:]) / 2
