import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamselect.channel import ChannelGain, ChannelRealization, RngSeed, sample_channel, wrap_phase
from beamselect.selection import composite_gain, received_power
from conftest import THREE_NODE, random_realizations


def test_single_node_invariants():
    h = sample_channel(1, RngSeed(5))
    assert len(h) == 1
    (g,) = h.gains
    assert isinstance(g, ChannelGain)
    assert g.amplitude >= 0
    assert -math.pi < g.phase <= math.pi


@pytest.mark.parametrize("K", [0, -3])
def test_nonpositive_k_rejected(K):
    with pytest.raises(ValueError):
        sample_channel(K, RngSeed(1))


def test_same_seed_same_realization():
    a = sample_channel(64, RngSeed(11, 3))
    b = sample_channel(64, RngSeed(11, 3))
    assert a == b
    assert np.array_equal(a.h, b.h)
    assert a != sample_channel(64, RngSeed(11, 4))
    assert a != sample_channel(64, RngSeed(12, 3))


def test_seed_range_checked():
    with pytest.raises(ValueError):
        sample_channel(2, RngSeed(-1))
    with pytest.raises(ValueError):
        sample_channel(2, RngSeed(0, 1 << 64))


@pytest.fixture(scope="module")
def big_draw():
    return sample_channel(1_000_000, RngSeed(2024, 1))


def test_rayleigh_mean(big_draw):
    assert abs(big_draw.amplitude.mean() - math.sqrt(math.pi) / 2) < 0.003


def test_threshold_exceedance(big_draw):
    assert abs((big_draw.amplitude >= 0.5316).mean() - math.exp(-0.5316**2)) < 0.003


def test_power_is_unit_exponential(big_draw):
    power = big_draw.amplitude**2
    assert abs(power.mean() - 1.0) < 0.005
    assert abs(power.var() - 1.0) < 0.02


def test_phase_uniform_and_independent(big_draw):
    ph = big_draw.phase
    assert ph.min() > -math.pi and ph.max() <= math.pi
    hist, _ = np.histogram(ph, bins=8, range=(-math.pi, math.pi))
    assert np.all(np.abs(hist / ph.size - 1 / 8) < 0.003)
    assert abs(np.corrcoef(big_draw.amplitude, ph)[0, 1]) < 0.005


def test_wrap_phase_boundary():
    out = wrap_phase([-math.pi, math.pi, 0.3, 4.0, -4.0, 3 * math.pi])
    assert out[0] == math.pi and out[1] == math.pi
    assert out[2] == 0.3
    assert out[3] == pytest.approx(4.0 - 2 * math.pi)
    assert out[4] == pytest.approx(2 * math.pi - 4.0)
    assert out[5] == pytest.approx(math.pi)


def test_from_gains_validates():
    with pytest.raises(ValueError):
        ChannelRealization.from_gains([])
    with pytest.raises(ValueError):
        ChannelRealization.from_gains([(-1.0, 0.0)])
    with pytest.raises(ValueError):
        ChannelRealization(np.ones(2), np.zeros(3))
    assert ChannelRealization.from_gains([(1.0, -math.pi)]).phase[0] == math.pi


def test_composite_single_node():
    h = ChannelRealization.from_gains([(1.0, 0.0)])
    assert composite_gain(h, [1]) == 1 + 0j


def test_composite_antiphase():
    h = ChannelRealization.from_gains([(1.0, 0.0), (1.0, math.pi)])
    assert abs(composite_gain(h, [1, 1])) < 1e-15


def test_composite_three_node(three_node):
    expected = (cmath.rect(1.2, 0.0) + cmath.rect(0.9, 0.4)) / math.sqrt(2)
    z = composite_gain(three_node, [1, 1, 0])
    assert z == pytest.approx(expected, abs=1e-15)
    assert z == pytest.approx(1.4346877646951328 + 0.24782431550838388j, abs=1e-15)


@pytest.mark.parametrize("s", [[0, 0, 0], [1, 1], [1, 0, 1, 0], [2, 0, 0]])
def test_composite_rejects_bad_selection(three_node, s):
    with pytest.raises(ValueError):
        composite_gain(three_node, s)


def test_composite_matches_power_on_random():
    rng = np.random.default_rng(3)
    for h in random_realizations(200, 1, 16, 4):
        s = rng.random(len(h)) < 0.5
        s[rng.integers(len(h))] = True
        assert abs(composite_gain(h, s)) ** 2 == received_power(h, s)


small = st.floats(0.01, 5.0)
phases = st.floats(-3.14, 3.14)
nodes = st.lists(st.tuples(small, phases), min_size=1, max_size=10)


@settings(max_examples=200, deadline=None)
@given(nodes, st.data())
def test_composite_transformations(gains, data):
    h = ChannelRealization.from_gains(gains)
    K = len(h)
    s = data.draw(st.lists(st.booleans(), min_size=K, max_size=K).filter(any))
    s = np.array(s)
    z = composite_gain(h, s)

    perm = np.array(data.draw(st.permutations(range(K))))
    assert composite_gain(h.permuted(perm), s[perm]) == pytest.approx(z, abs=1e-12)

    c = data.draw(st.floats(0.1, 10.0))
    assert composite_gain(h.scaled(c), s) == pytest.approx(c * z, rel=1e-12, abs=1e-12)

    theta = data.draw(st.floats(-10.0, 10.0))
    rotated = composite_gain(h.rotated(theta), s)
    assert rotated == pytest.approx(z * cmath.exp(1j * theta), abs=1e-11)
    assert abs(rotated) == pytest.approx(abs(z), rel=1e-12, abs=1e-14)


def test_three_node_constant_matches_conftest():
    assert [tuple(g) for g in ChannelRealization.from_gains(THREE_NODE).gains] == THREE_NODE
