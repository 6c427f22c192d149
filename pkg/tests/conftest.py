from fractions import Fraction

import pytest

from tandemnet import DutyFactor, NetworkSpec, Source, construct_sequences


@pytest.fixture(scope="session")
def two_way_spec():
    """Four nodes, one source at each end demanding the far end."""
    return NetworkSpec(4, [
        Source(1, 1, frozenset({4})),
        Source(2, 4, frozenset({1})),
    ])


@pytest.fixture(scope="session")
def five_node_spec():
    """Five nodes, sources at nodes 2 and 4, both demanding both ends."""
    return NetworkSpec(5, [
        Source(1, 2, frozenset({1, 5})),
        Source(2, 4, frozenset({1, 5})),
    ])


@pytest.fixture(scope="session")
def third_duties():
    return [DutyFactor(1, 3)] * 4


@pytest.fixture(scope="session")
def third_set(third_duties):
    return construct_sequences(third_duties)


@pytest.fixture(scope="session")
def mixed_set():
    """The worked five-sequence set with duties (1/3,1/3,1/3,2/3,2/3)."""
    return construct_sequences([
        DutyFactor(1, 3), DutyFactor(1, 3), DutyFactor(1, 3),
        DutyFactor(2, 3), DutyFactor(2, 3),
    ])


@pytest.fixture(scope="session")
def symmetric_rate():
    return Fraction(4, 27)
