"""Small hand-built instances with known behaviour, used by tests and scripts."""
from __future__ import annotations

from fractions import Fraction

from onlinefair.core import Instance


def manipulable_three_agents() -> Instance:
    """Items a, b, c; agent 0 likes all, agent 1 likes a and c, agent 2 likes b.

    Under Balanced Like agent 0 gains by not bidding on a.
    """
    return Instance.from_rows([[1, 1, 1], [1, 0, 1], [0, 1, 0]])


def two_agents_normalized() -> Instance:
    """Agent 0 values both items 1/2; agent 1 values them 1/4 and 3/4."""
    return Instance.from_rows([["1/2", "1/2"], ["1/4", "3/4"]], normalized=True)


def diagonal(k: int) -> Instance:
    """k agents, k items, agent i likes only item i."""
    return Instance.from_rows([[int(i == j) for j in range(k)] for i in range(k)])


def six_items() -> Instance:
    return Instance.from_rows(
        [
            [1, 1, 1, 0, 0, 0],
            [1, 0, 1, 0, 1, 1],
            [1, 1, 0, 1, 0, 1],
        ]
    )


def six_items_claimed_equilibrium() -> tuple[tuple[int, ...], ...]:
    """Sincere bids on :func:`six_items` with agent 0 dropping item a."""
    return ((0, 1, 1, 0, 0, 0), (1, 0, 1, 0, 1, 1), (1, 1, 0, 1, 0, 1))


def envy_growth(p) -> Instance:
    """Agent 0 values (0, p), agent 1 values (1, p-1); ex ante envy grows with p."""
    p = Fraction(p)
    return Instance.from_rows([[0, p], [1, p - 1]])


def one_picky_agent(k: int) -> Instance:
    """k^2 items; agent 0 likes the first k, everybody else likes everything."""
    return Instance.from_rows([[int(j < k) for j in range(k * k)]] + [[1] * (k * k) for _ in range(k - 1)])


def near_diagonal(k: int, eps) -> Instance:
    """k items; agent i values item i at 1-(k-1)eps and every other item at eps."""
    eps = Fraction(eps)
    big = 1 - (k - 1) * eps
    return Instance.from_rows([[big if i == j else eps for j in range(k)] for i in range(k)], normalized=True)


def balancing_trap(eps) -> Instance:
    """Two agents, four items, where balancing hands both agents their eps items."""
    eps = Fraction(eps)
    return Instance.from_rows(
        [
            [eps, 1 - 2 * eps, 0, eps],
            [0, eps, eps, 1 - 2 * eps],
        ],
        normalized=True,
    )
