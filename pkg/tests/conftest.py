import numpy as np
import pytest

from lpldpc import TannerGraph, generate_regular


@pytest.fixture
def single_check():
    """The smallest parity check: x0 + x1 + x2 = 0."""
    return TannerGraph(3, [[0, 1, 2]])


@pytest.fixture
def path_graph():
    """Path-shaped graph: v0 - c0 - v1 - c1 - v2."""
    return TannerGraph(3, [[0, 1], [1, 2]])


@pytest.fixture
def g34_small():
    return generate_regular(12, 3, 4, seed=11)


def awgn_llr(g, sigma, seed, trial, map_spec=None):
    """All-zeros transmission helper: modified LLRs for one trial."""
    from lpldpc import ChannelParams, apply_map, bpsk, normalized_llr, transmit_awgn

    params = ChannelParams(sigma * sigma)
    y = transmit_awgn(bpsk(np.zeros(g.n, dtype=np.uint8)), params, seed, trial)
    lam = normalized_llr(y, params)
    return apply_map(map_spec, lam) if map_spec is not None else lam
