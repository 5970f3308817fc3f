"""I.i.d. CN(0, 1) channel realizations in polar form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

_U64 = 1 << 64


def wrap_phase(phase):
    """Map angles to (-pi, pi]; -pi itself goes to +pi."""
    phase = np.asarray(phase, dtype=float)
    # in-range values pass through bit-exact
    return phase - 2.0 * np.pi * np.ceil((phase - np.pi) / (2.0 * np.pi))


class ChannelGain(NamedTuple):
    amplitude: float
    phase: float


class RngSeed(NamedTuple):
    """Master seed plus a per-trial substream id, both unsigned 64-bit."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        if not (0 <= self.seed < _U64 and 0 <= self.stream_id < _U64):
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """K node channels h_k = a_k exp(j phi_k), stored as two float arrays."""

    amplitude: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitude, dtype=float).reshape(-1)
        ph = np.array(self.phase, dtype=float).reshape(-1)
        if amp.size == 0:
            raise ValueError("a channel realization needs at least one node")
        if amp.shape != ph.shape:
            raise ValueError("amplitude and phase lengths differ")
        if np.any(amp < 0) or not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite and nonnegative")
        if not (ph.min() > -np.pi and ph.max() <= np.pi):
            raise ValueError("phases must lie in (-pi, pi]")
        amp.setflags(write=False)
        ph.setflags(write=False)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)

    @classmethod
    def _trusted(cls, amplitude: np.ndarray, phase: np.ndarray) -> "ChannelRealization":
        # skips validation for arrays already known to satisfy the invariants
        amplitude.setflags(write=False)
        phase.setflags(write=False)
        obj = object.__new__(cls)
        object.__setattr__(obj, "amplitude", amplitude)
        object.__setattr__(obj, "phase", phase)
        return obj

    @classmethod
    def from_gains(cls, gains: Iterable[tuple[float, float]]) -> "ChannelRealization":
        pairs = [tuple(g) for g in gains]
        if not pairs:
            raise ValueError("a channel realization needs at least one node")
        amp, ph = zip(*pairs)
        return cls(np.array(amp, dtype=float), wrap_phase(ph))

    @classmethod
    def from_complex(cls, h: Sequence[complex]) -> "ChannelRealization":
        h = np.asarray(h, dtype=complex)
        return cls(np.abs(h), wrap_phase(np.angle(h)))

    def __len__(self) -> int:
        return self.amplitude.size

    def __eq__(self, other):
        if not isinstance(other, ChannelRealization):
            return NotImplemented
        return np.array_equal(self.amplitude, other.amplitude) and np.array_equal(
            self.phase, other.phase
        )

    __hash__ = None

    @property
    def gains(self) -> list[ChannelGain]:
        return [ChannelGain(float(a), float(p)) for a, p in zip(self.amplitude, self.phase)]

    @property
    def h(self) -> np.ndarray:
        return self.amplitude * np.exp(1j * self.phase)

    def rotated(self, theta: float) -> "ChannelRealization":
        return ChannelRealization(self.amplitude, wrap_phase(self.phase + theta))

    def scaled(self, c: float) -> "ChannelRealization":
        if not c > 0:
            raise ValueError("scale factor must be positive")
        return ChannelRealization(self.amplitude * c, self.phase)

    def permuted(self, perm: Sequence[int]) -> "ChannelRealization":
        perm = np.asarray(perm)
        if sorted(perm.tolist()) != list(range(len(self))):
            raise ValueError("not a permutation of the node indices")
        return ChannelRealization(self.amplitude[perm], self.phase[perm])


def sample_channel(K: int, rng: RngSeed) -> ChannelRealization:
    """Draw K i.i.d. CN(0, 1) gains from the substream named by ``rng``.

    Real and imaginary parts are independent N(0, 1/2), so amplitudes are
    Rayleigh with E[a] = sqrt(pi)/2 and phases are uniform.
    """
    if isinstance(K, bool) or int(K) != K or K < 1:
        raise ValueError(f"K must be a positive integer, got {K!r}")
    xy = rng.generator().normal(0.0, math.sqrt(0.5), size=(int(K), 2))
    phase = np.arctan2(xy[:, 1], xy[:, 0])
    phase[phase == -np.pi] = np.pi
    return ChannelRealization._trusted(np.hypot(xy[:, 0], xy[:, 1]), phase)
