"""Single randomized runs of the Like and Balanced Like mechanisms."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from onlinefair.core import Allocation, BidProfile, FairDivisionError


class MechanismKind(enum.Enum):
    LIKE = "like"
    BALANCED_LIKE = "balanced"

    @classmethod
    def parse(cls, name: str) -> "MechanismKind":
        name = name.lower().replace("_", "-")
        aliases = {"like": cls.LIKE, "balanced": cls.BALANCED_LIKE, "balanced-like": cls.BALANCED_LIKE}
        try:
            return aliases[name]
        except KeyError:
            raise ValueError(f"unknown mechanism {name!r}") from None


class NotUnique(FairDivisionError):
    def __init__(self, item: int, bidders: Sequence[int]):
        super().__init__(f"item {item} has {len(bidders)} bidders {tuple(bidders)}")
        self.item = item


def eligible_agents(kind: MechanismKind, bidders: Sequence[int], counts: Sequence[int]) -> tuple[int, ...]:
    """Agents that can receive an item given its bidders and current item counts."""
    if kind is MechanismKind.LIKE or not bidders:
        return tuple(bidders)
    low = min(counts[i] for i in bidders)
    return tuple(i for i in bidders if counts[i] == low)


def make_rng(seed: int) -> np.random.Generator:
    # PCG64 has a documented, platform-independent stream under numpy's compat policy
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class Step:
    item: int
    eligible: tuple[int, ...]
    winner: Optional[int]
    counts_before: tuple[int, ...]


def run_with_trace(kind: MechanismKind, bids: BidProfile, seed: int) -> tuple[Allocation, list[Step]]:
    """Run a mechanism once; exactly one RNG draw per item with 2+ eligible agents."""
    rng = make_rng(seed)
    k = bids.num_agents
    counts = [0] * k
    owner: list[Optional[int]] = []
    trace = []
    for j in range(bids.num_items):
        elig = eligible_agents(kind, bids.bidders(j), counts)
        if not elig:
            winner = None
        elif len(elig) == 1:
            winner = elig[0]
        else:
            winner = elig[int(rng.integers(len(elig)))]
        trace.append(Step(j, elig, winner, tuple(counts)))
        if winner is not None:
            counts[winner] += 1
        owner.append(winner)
    return Allocation(tuple(owner)), trace


def run(kind: MechanismKind, bids: BidProfile, seed: int) -> Allocation:
    return run_with_trace(kind, bids, seed)[0]


def like_run(bids: BidProfile, seed: int) -> Allocation:
    return run(MechanismKind.LIKE, bids, seed)


def balanced_like_run(bids: BidProfile, seed: int) -> Allocation:
    return run(MechanismKind.BALANCED_LIKE, bids, seed)


def is_possible_like_outcome(bids: BidProfile, alloc: Allocation) -> bool:
    if alloc.num_items != bids.num_items:
        return False
    for j, o in enumerate(alloc.owner):
        bidders = bids.bidders(j)
        if o is None:
            if bidders:
                return False
        elif o not in bidders:
            return False
    return True


def necessary_like_outcome(bids: BidProfile) -> Allocation:
    """The unique outcome when no item has two bidders; raises NotUnique otherwise."""
    owner = []
    for j in range(bids.num_items):
        bidders = bids.bidders(j)
        if len(bidders) > 1:
            raise NotUnique(j, bidders)
        owner.append(bidders[0] if bidders else None)
    return Allocation(tuple(owner))
