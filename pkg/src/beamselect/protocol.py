"""Feedback accounting for centralized one-bit selection and the timer-based variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from beamselect.bounds import bound_constants
from beamselect.channel import ChannelRealization, wrap_phase
from beamselect.selection import as_selection


@dataclass(frozen=True)
class FeedbackBudget:
    bits_sent: int
    rounds: int
    broadcasts: int


@dataclass(frozen=True, eq=False)
class TimerSchedule:
    timeouts: np.ndarray
    winner: int


def centralized_feedback(s) -> FeedbackBudget:
    """The destination sends each node a single transmit/stay-silent bit."""
    sel = np.asarray(s)
    if sel.ndim != 1 or sel.size == 0:
        raise ValueError("selection must be a nonempty 1-D vector")
    as_selection(sel, sel.size)
    return FeedbackBudget(bits_sent=int(sel.size), rounds=1, broadcasts=0)


def timer_schedule(h: ChannelRealization, scale: float = 1.0) -> TimerSchedule:
    """Per-node timeouts inversely proportional to channel amplitude.

    Only the ordering matters; a zero-amplitude node never fires.  Equal
    timeouts resolve to the lowest index.
    """
    with np.errstate(divide="ignore"):
        timeouts = scale / h.amplitude
    return TimerSchedule(timeouts=timeouts, winner=int(np.argmax(h.amplitude)))


def distributed_select(
    h: ChannelRealization, r: float | None = None, alpha: float | None = None
) -> tuple[np.ndarray, FeedbackBudget]:
    """Selection without destination feedback.

    The first node to time out (the strongest) broadcasts its channel; every
    other node joins in the next slot if its amplitude is at least ``r`` and
    its phase is within ``alpha`` of the broadcast phase.
    """
    consts = bound_constants()
    r = consts.r_star if r is None else r
    alpha = consts.alpha_star if alpha is None else alpha
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    if not 0.0 < alpha <= np.pi:
        raise ValueError(f"alpha must lie in (0, pi], got {alpha}")
    winner = timer_schedule(h).winner
    offset = wrap_phase(h.phase - h.phase[winner])
    selected = (h.amplitude >= r) & (np.abs(offset) <= alpha)
    selected[winner] = True
    return selected, FeedbackBudget(bits_sent=0, rounds=2, broadcasts=1)
