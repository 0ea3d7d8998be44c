"""Welfare, envy, offline optima, competitive ratios and price of anarchy."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from onlinefair.core import Allocation, BidProfile, BudgetExceeded, Instance, sincere_bids
from onlinefair.dist import (
    DEFAULT_NODE_BUDGET,
    cross_expected_utilities,
    enumerate_outcomes,
    expected_min_value,
    expected_utilities,
)
from onlinefair.mechanisms import MechanismKind
from onlinefair.strategy import DEFAULT_PROFILE_BUDGET, EquilibriumReport, NoEquilibrium, enumerate_pne

ZERO = Fraction(0)


class WelfareKind(enum.Enum):
    EGALITARIAN = "egal"
    UTILITARIAN = "util"


class EgalitarianMode(enum.Enum):
    MIN_OF_EXPECTED = "min-exp"  # min_i E[u_i(A_i)]
    EXPECTED_MIN = "exp-min"  # E[min_i u_i(A_i)]


class RatioStatus(enum.Enum):
    UNBOUNDED = "unbounded"  # positive optimum, zero achieved welfare
    UNDEFINED = "undefined"  # both zero


Ratio = Union[Fraction, RatioStatus]


def ratio(optimum: Fraction, achieved: Fraction) -> Ratio:
    if achieved > 0:
        return Fraction(optimum) / achieved
    return RatioStatus.UNBOUNDED if optimum > 0 else RatioStatus.UNDEFINED


def bundle_values(instance: Instance, alloc: Allocation) -> tuple[Fraction, ...]:
    return tuple(instance.bundle_value(i, alloc.bundle(i)) for i in range(instance.num_agents))


def welfare_ex_post(instance: Instance, alloc: Allocation, kind: WelfareKind) -> Fraction:
    vals = bundle_values(instance, alloc)
    if kind is WelfareKind.EGALITARIAN:
        return min(vals)
    return sum(vals, ZERO)


def expected_welfare(
    kind: MechanismKind,
    instance: Instance,
    profile: BidProfile,
    welfare: WelfareKind,
    mode: EgalitarianMode = EgalitarianMode.MIN_OF_EXPECTED,
) -> Fraction:
    if welfare is WelfareKind.EGALITARIAN and mode is EgalitarianMode.EXPECTED_MIN:
        return expected_min_value(kind, instance, profile)
    eu = expected_utilities(kind, instance, profile)
    if welfare is WelfareKind.UTILITARIAN:
        return sum(eu, ZERO)
    return min(eu)


@dataclass(frozen=True)
class EnvyReport:
    ex_post_max: tuple[tuple[Fraction, ...], ...]  # max over outcomes of u_i(A_j) - u_i(A_i)
    ex_ante: tuple[tuple[Fraction, ...], ...]  # E[u_i(A_j)] - E[u_i(A_i)]

    @property
    def envy_free_ex_ante(self) -> bool:
        return all(x <= 0 for row in self.ex_ante for x in row)

    @property
    def max_ex_post(self) -> Fraction:
        return max(x for row in self.ex_post_max for x in row)


def envy_report(
    kind: MechanismKind,
    instance: Instance,
    profile: BidProfile,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> EnvyReport:
    k = instance.num_agents
    dist = enumerate_outcomes(kind, profile, node_budget)
    worst = [[None] * k for _ in range(k)]
    for alloc, _ in dist:
        bundles = [alloc.bundle(j) for j in range(k)]
        for i in range(k):
            own = instance.bundle_value(i, bundles[i])
            for j in range(k):
                envy = instance.bundle_value(i, bundles[j]) - own
                if worst[i][j] is None or envy > worst[i][j]:
                    worst[i][j] = envy
    cross = cross_expected_utilities(kind, instance, profile, node_budget)
    ex_ante = tuple(tuple(cross[i][j] - cross[i][i] for j in range(k)) for i in range(k))
    return EnvyReport(tuple(tuple(r) for r in worst), ex_ante)


# --- offline optimum --------------------------------------------------------


def _utilitarian_optimum(instance: Instance) -> tuple[Allocation, Fraction]:
    owner, total = [], ZERO
    for j in range(instance.num_items):
        col = [instance.utilities[i][j] for i in range(instance.num_agents)]
        best = max(col)
        owner.append(col.index(best))
        total += best
    return Allocation(tuple(owner)), total


def _egalitarian_optimum(instance: Instance, node_budget: int) -> tuple[Allocation, Fraction]:
    k, m = instance.num_agents, instance.num_items
    u = instance.utilities
    # rest[i][j]: what agent i could still gain from items j..m-1
    rest = [[ZERO] * (m + 1) for _ in range(k)]
    for i in range(k):
        for j in range(m - 1, -1, -1):
            rest[i][j] = rest[i][j + 1] + u[i][j]

    best_val: Optional[Fraction] = None
    best_owner: list[int] = []
    owner = [0] * m
    vals = [ZERO] * k
    nodes = 0

    def search(j: int) -> None:
        nonlocal best_val, best_owner, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded("egalitarian branch and bound", node_budget)
        if j == m:
            v = min(vals)
            if best_val is None or v > best_val:
                best_val, best_owner = v, owner.copy()
            return
        bound = min(vals[i] + rest[i][j] for i in range(k))
        if best_val is not None and bound <= best_val:
            return
        # a zero-utility recipient never raises the minimum, so only likers branch
        likers = [i for i in range(k) if u[i][j] > 0]
        if not likers:
            owner[j] = 0
            search(j + 1)
            return
        for i in sorted(likers, key=lambda a: (vals[a], a)):
            owner[j] = i
            vals[i] += u[i][j]
            search(j + 1)
            vals[i] -= u[i][j]

    search(0)
    return Allocation(tuple(best_owner)), best_val


def optimal_offline(
    instance: Instance, kind: WelfareKind, node_budget: int = DEFAULT_NODE_BUDGET
) -> tuple[Allocation, Fraction]:
    if kind is WelfareKind.UTILITARIAN:
        return _utilitarian_optimum(instance)
    return _egalitarian_optimum(instance, node_budget)


# --- ratios -----------------------------------------------------------------


def competitive_ratio(
    kind: MechanismKind,
    instance: Instance,
    welfare: WelfareKind,
    mode: EgalitarianMode = EgalitarianMode.MIN_OF_EXPECTED,
    optimum: Optional[Fraction] = None,
) -> Ratio:
    """Offline optimum over expected welfare under sincere bids (additive constant 0)."""
    if optimum is None:
        optimum = optimal_offline(instance, welfare)[1]
    return ratio(optimum, expected_welfare(kind, instance, sincere_bids(instance), welfare, mode))


@dataclass(frozen=True)
class PriceOfAnarchy:
    worst: Ratio  # optimum / welfare of the worst simple equilibrium
    best: Ratio  # optimum / welfare of the best simple equilibrium
    optimum: Fraction
    worst_welfare: Fraction
    best_welfare: Fraction
    report: EquilibriumReport


def equilibrium_welfare(eq, welfare: WelfareKind, mode: EgalitarianMode) -> Fraction:
    if welfare is WelfareKind.UTILITARIAN:
        return eq.utilitarian
    if mode is EgalitarianMode.EXPECTED_MIN:
        return eq.expected_min
    return eq.min_of_expected


def price_of_anarchy(
    kind: MechanismKind,
    instance: Instance,
    welfare: WelfareKind,
    mode: EgalitarianMode = EgalitarianMode.MIN_OF_EXPECTED,
    budget: int = DEFAULT_PROFILE_BUDGET,
    lexicographic: bool = True,
    optimum: Optional[Fraction] = None,
    report: Optional[EquilibriumReport] = None,
) -> PriceOfAnarchy:
    """Worst- and best-case ratios over the simple pure Nash equilibria."""
    if optimum is None:
        optimum = optimal_offline(instance, welfare)[1]
    report = report or enumerate_pne(kind, instance, simple=True, budget=budget, lexicographic=lexicographic)
    if not report.equilibria:
        raise NoEquilibrium("instance has no simple pure Nash equilibrium")
    values = [equilibrium_welfare(e, welfare, mode) for e in report]
    lo, hi = min(values), max(values)
    return PriceOfAnarchy(ratio(optimum, lo), ratio(optimum, hi), optimum, lo, hi, report)
