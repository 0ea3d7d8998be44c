"""Exact outcome distributions and expected utilities.

Three independent routes to the same numbers:

* a closed form for Like (each item's owner is an independent uniform draw),
* a forward dynamic program over count vectors for Balanced Like,
* brute-force expansion of the allocation tree (the oracle for both).
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Sequence

from onlinefair.core import (
    Allocation,
    BidProfile,
    BudgetExceeded,
    Instance,
    OutcomeDistribution,
)
from onlinefair.mechanisms import MechanismKind, eligible_agents, run

ItemProbabilityMatrix = tuple[tuple[Fraction, ...], ...]
CrossUtilityMatrix = tuple[tuple[Fraction, ...], ...]

DEFAULT_NODE_BUDGET = 10**7
DEFAULT_STATE_BUDGET = 10**6

ZERO = Fraction(0)


def like_item_probabilities(bids: BidProfile) -> ItemProbabilityMatrix:
    k, m = bids.num_agents, bids.num_items
    p = [[ZERO] * m for _ in range(k)]
    for j in range(m):
        bidders = bids.bidders(j)
        for i in bidders:
            p[i][j] = Fraction(1, len(bidders))
    return tuple(tuple(r) for r in p)


def _weighted_utilities(instance: Instance, p: ItemProbabilityMatrix) -> tuple[Fraction, ...]:
    return tuple(
        sum((u * q for u, q in zip(instance.utilities[i], p[i])), ZERO)
        for i in range(instance.num_agents)
    )


def like_expected_utilities(instance: Instance, bids: BidProfile) -> tuple[Fraction, ...]:
    bids.check_matches(instance)
    return _weighted_utilities(instance, like_item_probabilities(bids))


# --- allocation tree oracle -------------------------------------------------


def _expand_tree(
    kind: MechanismKind,
    bids: BidProfile,
    start_item: int,
    counts: Sequence[int],
    node_budget: int,
) -> dict[tuple, Fraction]:
    """Leaves of the allocation tree for items ``start_item..m-1``.

    Keys are owner tuples for the remaining items; identical leaves are merged.
    """
    frontier = [((), tuple(counts), Fraction(1))]
    nodes = 1
    for j in range(start_item, bids.num_items):
        bidders = bids.bidders(j)
        nxt = []
        for owners, c, prob in frontier:
            elig = eligible_agents(kind, bidders, c)
            if not elig:
                nxt.append((owners + (None,), c, prob))
                continue
            share = prob / len(elig)
            for e in elig:
                c2 = list(c)
                c2[e] += 1
                nxt.append((owners + (e,), tuple(c2), share))
        nodes += len(nxt)
        if nodes > node_budget:
            raise BudgetExceeded("allocation tree", node_budget)
        frontier = nxt
    leaves: dict[tuple, Fraction] = defaultdict(Fraction)
    for owners, _, prob in frontier:
        leaves[owners] += prob
    return leaves


def enumerate_outcomes(
    kind: MechanismKind, bids: BidProfile, node_budget: int = DEFAULT_NODE_BUDGET
) -> OutcomeDistribution:
    leaves = _expand_tree(kind, bids, 0, (0,) * bids.num_agents, node_budget)
    outcomes = sorted(((Allocation(o), p) for o, p in leaves.items()), key=lambda t: t[0].sort_key())
    return OutcomeDistribution(tuple(outcomes))


def marginals(dist: OutcomeDistribution, num_agents: int) -> ItemProbabilityMatrix:
    m = dist.outcomes[0][0].num_items
    p = [[ZERO] * m for _ in range(num_agents)]
    for alloc, prob in dist:
        for j, o in enumerate(alloc.owner):
            if o is not None:
                p[o][j] += prob
    return tuple(tuple(r) for r in p)


def subtree_utilities(
    kind: MechanismKind,
    instance: Instance,
    bids: BidProfile,
    start_item: int,
    counts: Sequence[int],
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[Fraction, ...]:
    """Expected utility each agent collects from items ``start_item..`` onwards,
    starting from the given item counts.

    Counts may be arbitrary integers (only their differences matter), which
    lets the caller probe states such as (x-1, y+1).
    """
    leaves = _expand_tree(kind, bids, start_item, counts, node_budget)
    eu = [ZERO] * instance.num_agents
    for owners, prob in leaves.items():
        for offset, o in enumerate(owners):
            if o is not None:
                eu[o] += prob * instance.utilities[o][start_item + offset]
    return tuple(eu)


# --- count-state dynamic program --------------------------------------------


def balanced_like_dp(
    instance: Instance, bids: BidProfile, state_budget: int = DEFAULT_STATE_BUDGET
) -> tuple[ItemProbabilityMatrix, tuple[Fraction, ...]]:
    """Item probabilities and expected utilities under Balanced Like.

    The mechanism only looks at how many items each agent holds, so the
    probability mass is carried per count vector rather than per history.
    """
    bids.check_matches(instance)
    k, m = bids.num_agents, bids.num_items
    p = [[ZERO] * m for _ in range(k)]
    mass: dict[tuple[int, ...], Fraction] = {(0,) * k: Fraction(1)}
    for j in range(m):
        bidders = bids.bidders(j)
        if not bidders:
            continue
        nxt: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
        for counts, prob in mass.items():
            elig = eligible_agents(MechanismKind.BALANCED_LIKE, bidders, counts)
            share = prob / len(elig)
            for e in elig:
                p[e][j] += share
                c2 = list(counts)
                c2[e] += 1
                nxt[tuple(c2)] += share
        if len(nxt) > state_budget:
            raise BudgetExceeded("count-state space", state_budget)
        mass = nxt
    probs = tuple(tuple(r) for r in p)
    return probs, _weighted_utilities(instance, probs)


def item_probabilities(kind: MechanismKind, instance: Instance, bids: BidProfile) -> ItemProbabilityMatrix:
    if kind is MechanismKind.LIKE:
        return like_item_probabilities(bids)
    return balanced_like_dp(instance, bids)[0]


def expected_utilities(kind: MechanismKind, instance: Instance, bids: BidProfile) -> tuple[Fraction, ...]:
    if kind is MechanismKind.LIKE:
        return like_expected_utilities(instance, bids)
    return balanced_like_dp(instance, bids)[1]


def cross_expected_utilities(
    kind: MechanismKind,
    instance: Instance,
    bids: BidProfile,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> CrossUtilityMatrix:
    """``E[i][j]``: expected utility agent i assigns to agent j's bundle."""
    bids.check_matches(instance)
    k = instance.num_agents
    if kind is MechanismKind.LIKE:
        p = like_item_probabilities(bids)
    else:
        p = marginals(enumerate_outcomes(kind, bids, node_budget), k)
    # E[i][j] = sum_items u_i(item) * P(j owns item), by linearity of expectation
    return tuple(
        tuple(sum((u * q for u, q in zip(instance.utilities[i], p[j])), ZERO) for j in range(k))
        for i in range(k)
    )


def bundle_value_distribution(
    kind: MechanismKind,
    instance: Instance,
    bids: BidProfile,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> dict[tuple[Fraction, ...], Fraction]:
    """Distribution of the vector (u_1(A_1), ..., u_k(A_k)) of own-bundle values.

    Runs the count-state DP with the running value vector added to the state;
    branches that agree on both are merged.
    """
    bids.check_matches(instance)
    k = instance.num_agents
    zero_vals = (ZERO,) * k
    # state: (counts shifted so the minimum is 0, values)
    mass: dict[tuple, Fraction] = {((0,) * k, zero_vals): Fraction(1)}
    for j in range(instance.num_items):
        bidders = bids.bidders(j)
        if not bidders:
            continue
        nxt: dict[tuple, Fraction] = defaultdict(Fraction)
        for (counts, vals), prob in mass.items():
            elig = eligible_agents(kind, bidders, counts)
            share = prob / len(elig)
            for e in elig:
                v2 = list(vals)
                v2[e] += instance.utilities[e][j]
                if kind is MechanismKind.LIKE:
                    c2 = counts
                else:
                    c = list(counts)
                    c[e] += 1
                    low = min(c)
                    c2 = tuple(x - low for x in c)
                nxt[(c2, tuple(v2))] += share
        if len(nxt) > state_budget:
            raise BudgetExceeded("count/value state space", state_budget)
        mass = nxt
    out: dict[tuple[Fraction, ...], Fraction] = defaultdict(Fraction)
    for (_, vals), prob in mass.items():
        out[vals] += prob
    return dict(out)


def expected_min_value(
    kind: MechanismKind, instance: Instance, bids: BidProfile, state_budget: int = DEFAULT_STATE_BUDGET
) -> Fraction:
    """E[min_i u_i(A_i)], the expectation of the per-outcome egalitarian welfare."""
    dist = bundle_value_distribution(kind, instance, bids, state_budget)
    return sum((p * min(v) for v, p in dist.items()), ZERO)


def outcome_distribution_values(
    dist: OutcomeDistribution, instance: Instance
) -> list[tuple[Allocation, Fraction, tuple[Fraction, ...]]]:
    """Attach each agent's own-bundle value to every outcome."""
    rows = []
    for alloc, prob in dist:
        vals = tuple(instance.bundle_value(i, alloc.bundle(i)) for i in range(instance.num_agents))
        rows.append((alloc, prob, vals))
    return rows


def empirical_frequencies(kind: MechanismKind, bids: BidProfile, seeds: Sequence[int]) -> list[list[int]]:
    """Win counts per (agent, item) over seeded runs."""
    counts = [[0] * bids.num_items for _ in range(bids.num_agents)]
    for s in seeds:
        alloc = run(kind, bids, s)
        for j, o in enumerate(alloc.owner):
            if o is not None:
                counts[o][j] += 1
    return counts


__all__ = [
    "ItemProbabilityMatrix",
    "CrossUtilityMatrix",
    "like_item_probabilities",
    "like_expected_utilities",
    "enumerate_outcomes",
    "marginals",
    "subtree_utilities",
    "balanced_like_dp",
    "item_probabilities",
    "expected_utilities",
    "cross_expected_utilities",
    "bundle_value_distribution",
    "expected_min_value",
    "outcome_distribution_values",
    "empirical_frequencies",
]
