import numpy as np
import pytest

from beamselect.channel import ChannelRealization

THREE_NODE = [(1.2, 0.0), (0.9, 0.4), (0.3, 2.8)]


@pytest.fixture
def three_node():
    return ChannelRealization.from_gains(THREE_NODE)


def random_realizations(n, k_low, k_high, seed):
    """Independent CN(0,1) draws that bypass sample_channel."""
    rng = np.random.default_rng(seed)
    for _ in range(n):
        K = int(rng.integers(k_low, k_high + 1))
        h = (rng.standard_normal(K) + 1j * rng.standard_normal(K)) / np.sqrt(2)
        yield ChannelRealization.from_complex(h)
