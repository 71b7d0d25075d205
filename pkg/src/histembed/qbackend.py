"""Simulated backend for amplitude embedding and computational-basis readout.

The embedded states here are real and non-negative and are only ever
measured in the computational basis, so a statevector plus multinomial
sampling reproduces the statistics of an ideal device exactly. No gate
decomposition or noise model is attempted.

Shot sampling uses numpy's ``Generator(PCG64(seed))``; PCG64 streams are
stable across platforms and numpy releases for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NormViolation

NORM_TOLERANCE = 1e-9
DEFAULT_SHOTS = 4096
GENERATOR_NAME = "numpy.random.Generator(PCG64)"
_U64_MAX = 2**64 - 1


def required_qubits(bins: int) -> int:
    """Smallest ``n`` with ``2**n >= bins``, in integer arithmetic."""
    if isinstance(bins, bool) or not isinstance(bins, (int, np.integer)) or bins < 1:
        raise InvalidParameter(f"bin count must be an integer >= 1, got {bins!r}")
    return (int(bins) - 1).bit_length()


@dataclass(frozen=True, eq=False)
class QuantumState:
    qubits: int
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class ShotRecord:
    shots: int
    counts: np.ndarray
    seed: int

    def frequencies(self) -> np.ndarray:
        return self.counts / self.shots

    def __eq__(self, other):
        if not isinstance(other, ShotRecord):
            return NotImplemented
        return (
            self.shots == other.shots
            and self.seed == other.seed
            and np.array_equal(self.counts, other.counts)
        )


def embed(amps) -> QuantumState:
    """Load an amplitude vector as an n-qubit state.

    Accepts an :class:`~histembed.histencode.AmplitudeVector` or any 1-D
    array whose length is a power of two.
    """
    vec = np.asarray(getattr(amps, "amplitudes", amps), dtype=np.float64)
    if vec.ndim != 1 or vec.size == 0 or vec.size & (vec.size - 1):
        raise InvalidParameter(f"amplitude vector length must be a power of two, got {vec.shape}")
    n = vec.size.bit_length() - 1
    declared = getattr(amps, "qubits", n)
    if declared != n:
        raise InvalidParameter(f"vector of length {vec.size} cannot hold {declared} qubits")
    norm_sq = float(np.dot(vec, vec))
    if not np.isfinite(norm_sq) or abs(norm_sq - 1.0) > NORM_TOLERANCE:
        raise NormViolation(f"squared norm {norm_sq!r} deviates from 1 by more than {NORM_TOLERANCE}")
    vec = vec.copy()
    vec.setflags(write=False)
    return QuantumState(qubits=n, amplitudes=vec)


def ideal_probabilities(state: QuantumState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def sample(state: QuantumState, shots: int, seed: int) -> ShotRecord:
    """Draw ``shots`` computational-basis measurements from ``state``."""
    if shots < 1:
        raise InvalidParameter(f"shots must be >= 1, got {shots}")
    if not 0 <= seed <= _U64_MAX:
        raise InvalidParameter(f"seed must be an unsigned 64-bit value, got {seed}")
    p = ideal_probabilities(state)
    # multinomial needs sum(p[:-1]) <= 1 to the last ulp
    p = p / p.sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.multinomial(shots, p).astype(np.int64)
    counts.setflags(write=False)
    return ShotRecord(shots=int(shots), counts=counts, seed=int(seed))


def estimate_histogram(rec: ShotRecord, n_blocks: int) -> np.ndarray:
    """Scale shot frequencies back to (fractional) bin counts."""
    if n_blocks < 1:
        raise InvalidParameter(f"n_blocks must be >= 1, got {n_blocks}")
    return (rec.counts * int(n_blocks)) / rec.shots
