"""Strategic bidding: expected utilities of arbitrary bid profiles, best
responses, dominance of sincere bidding and pure Nash equilibria.

"Simple" equilibria model an infinitesimal cost per declared like: agents
maximize expected utility first and, among ties, prefer fewer likes. Bidding
on a zero-utility item is then strictly dominated, so simple mode restricts
each agent to subsets of the items it values.

Enumerating every profile is done with :class:`ProfileTable`, which computes
the expected utility of all agents under all profiles at once and exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from onlinefair.core import BidProfile, BudgetExceeded, FairDivisionError, Instance, sincere_bids
from onlinefair.dist import expected_min_value, expected_utilities
from onlinefair.mechanisms import MechanismKind, eligible_agents

DEFAULT_PROFILE_BUDGET = 2**22
DEFAULT_STRATEGY_BUDGET = 2**16


class NoEquilibrium(FairDivisionError):
    pass


def candidate_items(instance: Instance, agent: int, simple: bool) -> tuple[int, ...]:
    if simple:
        return tuple(j for j, u in enumerate(instance.utilities[agent]) if u > 0)
    return tuple(range(instance.num_items))


def bid_vectors(num_items: int, candidates: Sequence[int]):
    """All bid rows supported on ``candidates``, in canonical order.

    The index of a row is the binary number whose most significant bit is the
    first candidate item.
    """
    n = len(candidates)
    for bits in product((False, True), repeat=n):
        row = [False] * num_items
        for j, b in zip(candidates, bits):
            row[j] = b
        yield tuple(row)


def expected_utility(kind: MechanismKind, instance: Instance, profile: BidProfile, agent: int) -> Fraction:
    return expected_utilities(kind, instance, profile)[agent]


def best_responses(
    kind: MechanismKind,
    instance: Instance,
    profile: BidProfile,
    agent: int,
    simple: bool,
    lexicographic: bool = True,
    budget: int = DEFAULT_STRATEGY_BUDGET,
) -> list[tuple[bool, ...]]:
    """Bid rows maximizing the agent's expected utility, others held fixed.

    In simple mode with ``lexicographic`` set, only maximizers with the fewest
    likes are returned.
    """
    cands = candidate_items(instance, agent, simple)
    if 2 ** len(cands) > budget:
        raise BudgetExceeded("best-response search", budget)
    scored = []
    for row in bid_vectors(instance.num_items, cands):
        eu = expected_utility(kind, instance, profile.with_row(agent, row), agent)
        scored.append((eu, sum(row), row))
    top = max(eu for eu, _, _ in scored)
    best = [(likes, row) for eu, likes, row in scored if eu == top]
    if simple and lexicographic:
        fewest = min(likes for likes, _ in best)
        best = [(likes, row) for likes, row in best if likes == fewest]
    return [row for _, row in best]


def is_pne(
    kind: MechanismKind,
    instance: Instance,
    profile: BidProfile,
    simple: bool,
    lexicographic: bool = True,
) -> bool:
    """Check one profile against every unilateral deviation."""
    profile.check_matches(instance)
    for i in range(instance.num_agents):
        if simple and any(b and u <= 0 for b, u in zip(profile.bids[i], instance.utilities[i])):
            return False
        if profile.bids[i] not in best_responses(kind, instance, profile, i, simple, lexicographic):
            return False
    return True


# --- all-profile tables -----------------------------------------------------


def _normalize(kind: MechanismKind, counts: Sequence[int]) -> tuple[int, ...]:
    if kind is MechanismKind.LIKE:
        return ()
    low = min(counts)
    return tuple(c - low for c in counts)


def _advance(kind: MechanismKind, state: tuple[int, ...], winner: int) -> tuple[int, ...]:
    if kind is MechanismKind.LIKE:
        return state
    c = list(state)
    c[winner] += 1
    return _normalize(kind, c)


class ProfileTable:
    """Exact expected utilities of every agent under every bid profile.

    ``values[s_1, ..., s_k, i]`` is agent i's expected utility times
    ``scale`` when agent a plays its strategy with index ``s_a`` (see
    :func:`bid_vectors`). Balanced Like only depends on count differences, so
    states are count vectors shifted to minimum zero.

    The items are split at a point t. A forward pass carries, for every way
    of bidding on items < t, the distribution over states and the utility
    collected so far; a backward pass gives, for every way of bidding on items
    >= t, the utility still to come from each state. A matrix product joins
    them. Probabilities are kept as integers over a common denominator.
    """

    def __init__(
        self,
        kind: MechanismKind,
        instance: Instance,
        simple: bool,
        budget: int = DEFAULT_PROFILE_BUDGET,
    ):
        self.kind = kind
        self.instance = instance
        self.simple = simple
        k, m = instance.num_agents, instance.num_items
        self.candidates = tuple(candidate_items(instance, i, simple) for i in range(k))
        nbits = sum(len(c) for c in self.candidates)
        if 2**nbits > budget:
            raise BudgetExceeded(f"profile space 2^{nbits}", budget)
        # bidders allowed on each item, in agent order
        allowed = [tuple(i for i in range(k) if j in self.candidates[i]) for j in range(m)]
        self._allowed = allowed

        unit = math.lcm(*(u.denominator for row in instance.utilities for u in row))
        uint = [[int(u * unit) for u in row] for row in instance.utilities]
        step = [math.lcm(*range(1, len(a) + 1)) if a else 1 for a in allowed]
        self.scale = math.prod(step) * unit
        bound = math.prod(step) * max(sum(row) for row in uint)
        self._dtype = np.int64 if bound < 2**62 else object

        levels = self._state_levels(allowed)
        trans = [self._transitions(j, allowed[j], levels[j], levels[j + 1], uint, step[j]) for j in range(m)]
        t = self._split_point([2 ** len(a) for a in allowed])

        dt = self._dtype
        fwd = np.ones((1, 1), dtype=dt)
        acc = np.zeros((1, k), dtype=dt)
        for j in range(t):
            fs, accs = [], []
            for tc, rc in trans[j]:
                fs.append(fwd @ tc)
                accs.append(acc * step[j] + fwd @ rc)
            fwd = np.stack(fs, axis=1).reshape(-1, len(levels[j + 1]))
            acc = np.stack(accs, axis=1).reshape(-1, k)

        val = np.zeros((len(levels[m]), 1, k), dtype=dt)
        tail = 1
        for j in range(m - 1, t - 1, -1):
            vs = []
            for tc, rc in trans[j]:
                vs.append(np.tensordot(tc, val, axes=(1, 0)) + rc[:, None, :] * tail)
            val = np.stack(vs, axis=1).reshape(len(levels[j]), -1, k)
            tail *= step[j]

        table = np.empty((fwd.shape[0], val.shape[1], k), dtype=dt)
        for i in range(k):
            table[:, :, i] = acc[:, i : i + 1] * tail + fwd @ val[:, :, i]

        # one axis per free bid bit, item-major; regroup the axes by agent
        owners = [a for j in range(m) for a in allowed[j]]
        table = table.reshape([2] * nbits + [k])
        order = [ax for i in range(k) for ax, a in enumerate(owners) if a == i]
        table = table.transpose(order + [nbits])
        self.shape = tuple(2 ** len(c) for c in self.candidates)
        self.values = table.reshape(self.shape + (k,))

    def _state_levels(self, allowed):
        k = self.instance.num_agents
        levels = [[_normalize(self.kind, (0,) * k)]]
        for a in allowed:
            seen = dict.fromkeys(levels[-1])
            for s in levels[-1]:
                for e in a:
                    seen.setdefault(_advance(self.kind, s, e))
            levels.append(list(seen))
        return levels

    def _transitions(self, j, allowed, here, there, uint, step):
        k = self.instance.num_agents
        index = {s: n for n, s in enumerate(there)}
        out = []
        n = len(allowed)
        for c in range(2**n):
            # most significant bit <-> first allowed agent
            bidders = tuple(a for b, a in enumerate(allowed) if c >> (n - 1 - b) & 1)
            tc = np.zeros((len(here), len(there)), dtype=self._dtype)
            rc = np.zeros((len(here), k), dtype=self._dtype)
            for si, s in enumerate(here):
                elig = eligible_agents(self.kind, bidders, s) if bidders else ()
                if not elig:
                    tc[si, index[s]] += step
                    continue
                share = step // len(elig)
                for e in elig:
                    tc[si, index[_advance(self.kind, s, e)]] += share
                    rc[si, e] += share * uint[e][j]
            out.append((tc, rc))
        return out

    @staticmethod
    def _split_point(sizes):
        total = math.prod(sizes)
        best, best_cost, run = 0, total, 1
        for t in range(len(sizes) + 1):
            cost = max(run, total // run)
            if cost < best_cost:
                best, best_cost = t, cost
            if t < len(sizes):
                run *= sizes[t]
        return best

    @property
    def num_profiles(self) -> int:
        return math.prod(self.shape)

    def strategy_row(self, agent: int, index: int) -> tuple[bool, ...]:
        cands = self.candidates[agent]
        n = len(cands)
        row = [False] * self.instance.num_items
        for b, j in enumerate(cands):
            if index >> (n - 1 - b) & 1:
                row[j] = True
        return tuple(row)

    def strategy_index(self, agent: int, row: Sequence[bool]) -> int:
        cands = set(self.candidates[agent])
        if any(b and j not in cands for j, b in enumerate(row)):
            raise ValueError(f"row bids outside agent {agent}'s strategy space")
        idx = 0
        for j in self.candidates[agent]:
            idx = (idx << 1) | int(bool(row[j]))
        return idx

    def profile(self, index: Sequence[int]) -> BidProfile:
        return BidProfile(tuple(self.strategy_row(i, s) for i, s in enumerate(index)))

    def index_of(self, profile: BidProfile) -> tuple[int, ...]:
        return tuple(self.strategy_index(i, row) for i, row in enumerate(profile.bids))

    def utilities(self, index: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(v), self.scale) for v in self.values[tuple(index)])

    def _likes(self, agent: int) -> np.ndarray:
        counts = np.array([bin(s).count("1") for s in range(self.shape[agent])])
        shape = [1] * len(self.shape)
        shape[agent] = -1
        return counts.reshape(shape)

    def best_response_mask(self, agent: int, lexicographic: bool = True) -> np.ndarray:
        """True where the agent's strategy is a best response to the others."""
        vals = self.values[..., agent]
        best = np.asarray(vals == vals.max(axis=agent, keepdims=True), dtype=bool)
        if self.simple and lexicographic:
            likes = np.broadcast_to(self._likes(agent), best.shape)
            fewest = np.where(best, likes, np.iinfo(np.int64).max).min(axis=agent, keepdims=True)
            best &= likes == fewest
        return best

    def equilibrium_mask(self, lexicographic: bool = True) -> np.ndarray:
        mask = np.ones(self.shape, dtype=bool)
        for i in range(self.instance.num_agents):
            mask &= self.best_response_mask(i, lexicographic)
        return mask


# --- dominance and equilibria -----------------------------------------------


@dataclass(frozen=True)
class DominanceResult:
    dominant: bool
    opponents: Optional[BidProfile] = None  # witness profile, with the agent bidding sincerely
    deviation: Optional[tuple[bool, ...]] = None
    sincere_utility: Optional[Fraction] = None
    deviation_utility: Optional[Fraction] = None

    def __bool__(self):
        return self.dominant


def is_sincere_dominant(
    kind: MechanismKind,
    instance: Instance,
    agent: int,
    budget: int = DEFAULT_PROFILE_BUDGET,
) -> DominanceResult:
    """Is sincere bidding a best response to every profile of the others?

    Opponents and the agent range over all 2^m bid rows.
    """
    table = ProfileTable(kind, instance, simple=False, budget=budget)
    sincere = table.strategy_index(agent, sincere_bids(instance).bids[agent])
    vals = table.values[..., agent]
    best = vals.max(axis=agent)
    mine = np.take(vals, sincere, axis=agent)
    bad = np.argwhere(np.asarray(mine < best, dtype=bool))
    if len(bad) == 0:
        return DominanceResult(True)
    others = [int(x) for x in bad[0]]
    index = others[:agent] + [sincere] + others[agent:]
    column = vals[tuple(index[:agent]) + (slice(None),) + tuple(index[agent + 1 :])]
    dev = int(np.argmax(column))
    return DominanceResult(
        False,
        opponents=table.profile(index),
        deviation=table.strategy_row(agent, dev),
        sincere_utility=Fraction(int(mine[tuple(others)]), table.scale),
        deviation_utility=Fraction(int(column[dev]), table.scale),
    )


@dataclass(frozen=True)
class Equilibrium:
    profile: BidProfile
    utilities: tuple[Fraction, ...]
    expected_min: Fraction

    @property
    def utilitarian(self) -> Fraction:
        return sum(self.utilities, Fraction(0))

    @property
    def min_of_expected(self) -> Fraction:
        return min(self.utilities)


@dataclass(frozen=True)
class EquilibriumReport:
    kind: MechanismKind
    simple: bool
    lexicographic: bool
    equilibria: tuple[Equilibrium, ...] = field(default=())
    profiles_searched: int = 0

    @property
    def profiles(self) -> list[BidProfile]:
        return [e.profile for e in self.equilibria]

    @property
    def unique(self) -> bool:
        return len(self.equilibria) == 1

    def __len__(self):
        return len(self.equilibria)

    def __iter__(self):
        return iter(self.equilibria)


def enumerate_pne(
    kind: MechanismKind,
    instance: Instance,
    simple: bool,
    budget: int = DEFAULT_PROFILE_BUDGET,
    lexicographic: bool = True,
    table: Optional[ProfileTable] = None,
) -> EquilibriumReport:
    """All pure Nash equilibria, in canonical profile order."""
    table = table or ProfileTable(kind, instance, simple, budget)
    mask = table.equilibrium_mask(lexicographic)
    eqs = []
    for idx in np.argwhere(mask):
        idx = tuple(int(x) for x in idx)
        profile = table.profile(idx)
        eqs.append(Equilibrium(profile, table.utilities(idx), expected_min_value(kind, instance, profile)))
    return EquilibriumReport(kind, simple, lexicographic, tuple(eqs), table.num_profiles)
