import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from relators.distributors import validate_distributor  # noqa: E402
from relators.groupoid import discrete, group_groupoid  # noqa: E402
from relators.groups import cyclic  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def trivial_actions(A, B, sizes):
    """Identity-only actions for distributors between discrete groupoids."""
    left, right = {}, {}
    s = 0
    for b in B.objects:
        for a in A.objects:
            for _ in range(sizes.get((b, a), 0)):
                left[A.identity[a], s] = s
                right[s, B.identity[b]] = s
                s += 1
    return left, right


def discrete_distributor(A, B, sizes):
    left, right = trivial_actions(A, B, sizes)
    return validate_distributor(A, B, sizes, left, right)


@pytest.fixture
def z2():
    return group_groupoid(cyclic(2))


def regular_biset(G):
    """The one-object group ``G`` acting on itself from both sides."""
    n = G.n_arrows
    left = {(a, s): G.mul(a, s) for a in range(n) for s in range(n)}
    right = {(s, b): G.mul(s, b) for s in range(n) for b in range(n)}
    return validate_distributor(G, G, {(0, 0): n}, left, right)


@pytest.fixture
def z2_biset(z2):
    return regular_biset(z2)


@pytest.fixture
def five_pair():
    """Discrete A = C = 1, B = {b1, b2}; |S(b1)| = 2, |S(b2)| = 1, |T(b1)| = 1, |T(b2)| = 3."""
    one, two = discrete(1), discrete(2)
    S = discrete_distributor(one, two, {(0, 0): 2, (1, 0): 1})
    T = discrete_distributor(two, one, {(0, 0): 1, (0, 1): 3})
    return S, T


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
