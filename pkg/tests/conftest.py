import pytest

from gossip_age.topologies import random_network


def seeded_network(seed: int, n: int | None = None, *, edge_probability=0.35,
                   rate_low=0.1, rate_high=1.0, src_probability=0.6):
    """Shared family of seeded random networks used across suites."""
    if n is None:
        n = 2 + seed % 7  # cycle n through 2..8
    return random_network(n, edge_probability, rate_low, rate_high,
                          src_probability, seed)


@pytest.fixture
def two_node_chain():
    from gossip_age.network import GossipNetwork

    return GossipNetwork(n=2, lambda_e=1.0, source_rates=(2.0, 0.0),
                         push_rates={(1, 2): 3.0})
