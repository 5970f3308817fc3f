"""Node selection rules for opportunistic collaborative beamforming.

A selection is a boolean array of length K.  Total transmit power is split
evenly over the selected nodes, so the received power of a selection is
|sum of selected h_k|^2 / (number selected).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from beamselect.channel import ChannelRealization, wrap_phase

DEFAULT_EXHAUSTIVE_CAP = 24

# rows of the high-half table evaluated per block in exhaustive search
_BLOCK_ELEMENTS = 1 << 20


class ComplexityLimitError(ValueError):
    """Exhaustive search requested above the configured node-count cap."""


@dataclass(frozen=True, eq=False)
class SelectionOutcome:
    selected: np.ndarray
    power: float
    composite: complex
    iterations: int = 0
    trace: tuple[float, ...] = field(default=())

    @property
    def indices(self) -> list[int]:
        """Zero-based indices of the selected nodes."""
        return np.flatnonzero(self.selected).tolist()

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.selected))

    @property
    def fraction(self) -> float:
        return self.count / self.selected.size


def as_selection(s, K: int) -> np.ndarray:
    """Coerce a 0/1 sequence to a boolean selection of length K."""
    sel = np.asarray(s)
    if sel.ndim != 1 or sel.size != K:
        raise ValueError(f"selection length {sel.size} does not match K={K}")
    if sel.dtype != bool:
        if not np.all((sel == 0) | (sel == 1)):
            raise ValueError("selection entries must be 0 or 1")
        sel = sel.astype(bool)
    return sel


def selection_from_indices(indices: Sequence[int], K: int) -> np.ndarray:
    sel = np.zeros(K, dtype=bool)
    sel[list(indices)] = True
    return sel


def _checked(h: ChannelRealization, s) -> np.ndarray:
    sel = as_selection(s, len(h))
    if not sel.any():
        raise ValueError("selection is empty")
    return sel


def composite_gain(h: ChannelRealization, s) -> complex:
    """Normalized complex sum of the selected channels."""
    sel = _checked(h, s)
    return complex(h.h[sel].sum() / math.sqrt(np.count_nonzero(sel)))


def coherent_composite(h: ChannelRealization, s) -> complex:
    """Composite gain as if every selected channel arrived at zero phase."""
    sel = _checked(h, s)
    return complex(h.amplitude[sel].sum() / math.sqrt(np.count_nonzero(sel)))


def received_power(h: ChannelRealization, s) -> float:
    return abs(composite_gain(h, s)) ** 2


def coherent_power(h: ChannelRealization, s) -> float:
    return abs(coherent_composite(h, s)) ** 2


def _outcome(
    h: ChannelRealization,
    sel: np.ndarray,
    gain: Callable[[ChannelRealization, np.ndarray], complex] = composite_gain,
    iterations: int = 0,
    trace: tuple[float, ...] = (),
) -> SelectionOutcome:
    # every rule scores its final set through the same gain function so that
    # identical sets always report bit-identical powers
    z = gain(h, sel)
    sel = sel.copy()
    sel.setflags(write=False)
    return SelectionOutcome(sel, abs(z) ** 2, z, iterations, trace)


def two_node_rule(a1: float, a2: float, delta: float) -> bool:
    """True when both nodes transmitting beats the stronger node alone.

    Requires a1 >= a2 > 0; equality counts as a win for joint transmission.
    """
    if not a2 > 0:
        raise ValueError(f"a2 must be positive, got {a2}")
    if a2 > a1:
        raise ValueError(f"a1 must be the stronger node (a1={a1}, a2={a2})")
    rho = a2 / a1
    return math.cos(delta) >= (1.0 - rho * rho) / (2.0 * rho)


def _subset_table(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Complex sums and sizes for every subset mask of ``h`` (bit j = node j)."""
    sums = np.zeros(1, dtype=complex)
    counts = np.zeros(1, dtype=np.int64)
    for value in h:
        sums = np.concatenate([sums, sums + value])
        counts = np.concatenate([counts, counts + 1])
    return sums, counts


def _tie_key(mask: int, K: int) -> tuple[int, list[int]]:
    idx = [k for k in range(K) if mask >> k & 1]
    return len(idx), idx


def exhaustive_select(
    h: ChannelRealization, cap: int = DEFAULT_EXHAUSTIVE_CAP
) -> SelectionOutcome:
    """Optimal selection by enumerating all 2^K - 1 nonempty subsets.

    Equal powers resolve to the smaller subset, then to the lexicographically
    smallest sorted index list.
    """
    K = len(h)
    if K > cap:
        raise ComplexityLimitError(
            f"exhaustive search over K={K} nodes exceeds the cap of {cap}"
        )
    # meet in the middle: subset sum = low-half sum + high-half sum
    low_bits = K // 2
    hv = h.h
    low_sums, low_counts = _subset_table(hv[:low_bits])
    high_sums, high_counts = _subset_table(hv[low_bits:])
    rows_per_block = max(1, _BLOCK_ELEMENTS // low_sums.size)

    best = -math.inf
    ties: list[int] = []
    with np.errstate(divide="ignore", invalid="ignore"):
        for start in range(0, high_sums.size, rows_per_block):
            stop = min(start + rows_per_block, high_sums.size)
            total = high_sums[start:stop, None] + low_sums[None, :]
            count = high_counts[start:stop, None] + low_counts[None, :]
            power = (total.real**2 + total.imag**2) / count
            if start == 0:
                power[0, 0] = -math.inf
            block_best = power.max()
            if block_best < best:
                continue
            rows, cols = np.nonzero(power == block_best)
            masks = [((start + int(r)) << low_bits) | int(c) for r, c in zip(rows, cols)]
            if block_best > best:
                best, ties = block_best, masks
            else:
                ties.extend(masks)

    mask = min(ties, key=lambda m: _tie_key(m, K))
    sel = np.array([bool(mask >> k & 1) for k in range(K)])
    return _outcome(h, sel)


def amplitude_threshold_select(h: ChannelRealization, r: float) -> np.ndarray:
    """Select every node with a_k >= r; the result may be empty."""
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    return h.amplitude >= r


def sector_select(
    h: ChannelRealization, r: float, alpha: float, center: float = 0.0
) -> np.ndarray:
    """Select nodes with a_k >= r whose phase lies within alpha of ``center``."""
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    if not 0.0 < alpha <= math.pi:
        raise ValueError(f"alpha must lie in (0, pi], got {alpha}")
    offset = h.phase if center == 0.0 else wrap_phase(h.phase - center)
    return (h.amplitude >= r) & (np.abs(offset) <= alpha)


def single_best_select(h: ChannelRealization) -> SelectionOutcome:
    best = int(np.argmax(h.amplitude))
    return _outcome(h, selection_from_indices([best], len(h)))


def greedy_select(h: ChannelRealization) -> SelectionOutcome:
    """Iterative greedy selection seeded with the strongest node.

    Each step scores every unselected node i by
    cos(D_i) - (P - a_i^2) / (2 a_i sqrt(N P)), where D_i is the phase of h_i
    relative to the current composite gain, and admits the best one only if
    the score is strictly positive, i.e. only if it raises the normalized
    received power.
    """
    K = len(h)
    amp = h.amplitude
    hv = h.h
    seed = int(np.argmax(amp))
    selected = np.zeros(K, dtype=bool)
    selected[seed] = True
    total = hv[seed]  # sqrt(N) * z^(N)
    n = 1
    power = abs(total) ** 2
    trace = [power]

    with np.errstate(divide="ignore", invalid="ignore"):
        while n < K and power > 0.0:
            mag = abs(total)  # sqrt(N * P^(N))
            cos_delta = (hv.real * total.real + hv.imag * total.imag) / (amp * mag)
            threshold = (power - amp * amp) / (2.0 * amp * mag)
            score = cos_delta - threshold
            score[selected | (amp == 0.0)] = -np.inf
            i = int(np.argmax(score))
            if not cos_delta[i] > threshold[i]:
                break
            new_total = total + hv[i]
            new_power = abs(new_total) ** 2 / (n + 1)
            if not new_power > power:
                # rounding left a nominal gain that does not materialize
                break
            total, power, n = new_total, new_power, n + 1
            selected[i] = True
            trace.append(power)

    return _outcome(h, selected, iterations=n, trace=tuple(trace))


def with_fallback(
    rule_output,
    h: ChannelRealization,
    gain: Callable[[ChannelRealization, np.ndarray], complex] = composite_gain,
) -> SelectionOutcome:
    """Finite-K guard for the threshold rules.

    Returns the single strongest node when ``rule_output`` is empty or scores
    below it under ``gain`` (pass :func:`coherent_composite` for the
    zero-phase upper-bound curve).
    """
    sel = as_selection(rule_output, len(h))
    best = single_best_select(h)
    if not sel.any():
        return best
    candidate = _outcome(h, sel, gain)
    if candidate.power < best.power:
        return best
    return candidate
