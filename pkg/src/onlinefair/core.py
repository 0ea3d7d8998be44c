"""Domain types for online fair division with exact rational arithmetic.

Items arrive in index order 0..m-1. Utilities and probabilities are
``fractions.Fraction`` everywhere; floats only show up when rendering output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction


class FairDivisionError(Exception):
    """Base class for all errors raised by this package."""


class NegativeUtility(FairDivisionError):
    def __init__(self, agent: int, item: int):
        super().__init__(f"negative utility for agent {agent}, item {item}")
        self.agent = agent
        self.item = item


class NotNormalized(FairDivisionError):
    def __init__(self, agent: int, total: Fraction):
        super().__init__(f"utilities of agent {agent} sum to {total}, not 1")
        self.agent = agent
        self.total = total


class ParseError(FairDivisionError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DimensionMismatch(FairDivisionError):
    pass


class BudgetExceeded(FairDivisionError):
    def __init__(self, what: str, budget: int):
        super().__init__(f"{what} exceeds budget of {budget}")
        self.budget = budget


def to_rational(value) -> Fraction:
    if isinstance(value, float):
        # floats are only accepted when they are exactly representable short decimals
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class Instance:
    """k agents, m items in arrival order, and a k x m utility matrix."""

    utilities: tuple[tuple[Fraction, ...], ...]
    normalized: bool = False

    def __post_init__(self):
        rows = tuple(tuple(to_rational(u) for u in row) for row in self.utilities)
        if not rows or not rows[0]:
            raise DimensionMismatch("an instance needs at least one agent and one item")
        if any(len(row) != len(rows[0]) for row in rows):
            raise DimensionMismatch("utility rows have different lengths")
        object.__setattr__(self, "utilities", rows)
        validate_instance(self, self.normalized)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], normalized: bool = False) -> "Instance":
        return cls(tuple(tuple(r) for r in rows), normalized)

    @property
    def num_agents(self) -> int:
        return len(self.utilities)

    @property
    def num_items(self) -> int:
        return len(self.utilities[0])

    @property
    def is_binary(self) -> bool:
        """True for 0/1 instances (every utility is exactly 0 or 1)."""
        return all(u in (0, 1) for row in self.utilities for u in row)

    def utility(self, agent: int, item: int) -> Fraction:
        return self.utilities[agent][item]

    def bundle_value(self, agent: int, items: Iterable[int]) -> Fraction:
        row = self.utilities[agent]
        return sum((row[j] for j in items), Fraction(0))

    def likers(self, item: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.num_agents) if self.utilities[i][item] > 0)


@dataclass(frozen=True)
class BidProfile:
    """Declared likes: ``bids[i][j]`` is True iff agent i bids on item j."""

    bids: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(bool(b) for b in row) for row in self.bids)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("bid rows have different lengths")
        object.__setattr__(self, "bids", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "BidProfile":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_sets(cls, num_items: int, sets: Sequence[Iterable[int]]) -> "BidProfile":
        rows = []
        for s in sets:
            s = set(s)
            rows.append(tuple(j in s for j in range(num_items)))
        return cls(tuple(rows))

    @property
    def num_agents(self) -> int:
        return len(self.bids)

    @property
    def num_items(self) -> int:
        return len(self.bids[0])

    def bidders(self, item: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.num_agents) if self.bids[i][item])

    def num_likes(self, agent: int) -> int:
        return sum(self.bids[agent])

    def bid_set(self, agent: int) -> frozenset[int]:
        return frozenset(j for j, b in enumerate(self.bids[agent]) if b)

    def with_row(self, agent: int, row: Iterable[bool]) -> "BidProfile":
        rows = list(self.bids)
        rows[agent] = tuple(row)
        return BidProfile(tuple(rows))

    def check_matches(self, instance: Instance) -> None:
        if (self.num_agents, self.num_items) != (instance.num_agents, instance.num_items):
            raise DimensionMismatch(
                f"bids are {self.num_agents}x{self.num_items}, instance is "
                f"{instance.num_agents}x{instance.num_items}"
            )


@dataclass(frozen=True, order=True)
class Allocation:
    """Owner of each item; None means the item went to nobody."""

    owner: tuple[Optional[int], ...]

    @property
    def num_items(self) -> int:
        return len(self.owner)

    def bundle(self, agent: int) -> tuple[int, ...]:
        return tuple(j for j, o in enumerate(self.owner) if o == agent)

    def counts(self, num_agents: int) -> tuple[int, ...]:
        c = [0] * num_agents
        for o in self.owner:
            if o is not None:
                c[o] += 1
        return tuple(c)

    def sort_key(self):
        return tuple(-1 if o is None else o for o in self.owner)


@dataclass(frozen=True)
class OutcomeDistribution:
    outcomes: tuple[tuple[Allocation, Fraction], ...]

    def __post_init__(self):
        total = sum((p for _, p in self.outcomes), Fraction(0))
        if total != 1:
            raise ValueError(f"outcome probabilities sum to {total}")
        if any(p <= 0 for _, p in self.outcomes):
            raise ValueError("outcome probabilities must be positive")
        if len({a for a, _ in self.outcomes}) != len(self.outcomes):
            raise ValueError("duplicate allocations in distribution")

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self):
        return len(self.outcomes)

    def probability(self, predicate) -> Fraction:
        return sum((p for a, p in self.outcomes if predicate(a)), Fraction(0))


@dataclass(frozen=True)
class CountState:
    """Items allocated so far to each agent, before item ``round`` arrives."""

    counts: tuple[int, ...]
    round: int = field(default=0)

    def __post_init__(self):
        if any(c < 0 for c in self.counts) or sum(self.counts) > self.round:
            raise ValueError(f"inconsistent count state {self.counts} at round {self.round}")


def sincere_bids(instance: Instance) -> BidProfile:
    """Bid exactly on the items with strictly positive utility."""
    return BidProfile(tuple(tuple(u > 0 for u in row) for row in instance.utilities))


def validate_instance(instance: Instance, require_normalized: bool = False) -> None:
    for i, row in enumerate(instance.utilities):
        for j, u in enumerate(row):
            if u < 0:
                raise NegativeUtility(i, j)
    if require_normalized:
        for i, row in enumerate(instance.utilities):
            total = sum(row, Fraction(0))
            if total != 1:
                raise NotNormalized(i, total)


# --- text formats ---------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_header(lines) -> tuple[int, int]:
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise ParseError(1, "empty input") from None
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(lineno, "header must be 'k m'")
    try:
        k, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(lineno, f"bad header {line!r}") from None
    if k < 1 or m < 1:
        raise ParseError(lineno, "k and m must be positive")
    return k, m


def parse_instance(text: str, normalized: bool = False) -> Instance:
    """Parse the native instance format.

    Line 1 is ``k m``; the next k lines hold m rationals each (``p/q`` or ``p``).
    Lines starting with ``#`` are comments.
    """
    lines = _content_lines(text)
    k, m = _parse_header(lines)
    rows = []
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != m:
            raise DimensionMismatch(f"line {lineno}: expected {m} utilities, got {len(parts)}")
        try:
            rows.append(tuple(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError):
            raise ParseError(lineno, f"bad rational in {line!r}") from None
    if len(rows) != k:
        raise DimensionMismatch(f"expected {k} utility rows, got {len(rows)}")
    return Instance(tuple(rows), normalized)


def serialize_instance(instance: Instance) -> str:
    out = [f"{instance.num_agents} {instance.num_items}"]
    for row in instance.utilities:
        out.append(" ".join(str(u) for u in row))
    return "\n".join(out) + "\n"


def parse_bids(text: str) -> BidProfile:
    lines = _content_lines(text)
    k, m = _parse_header(lines)
    rows = []
    for lineno, line in lines:
        line = line.replace(" ", "")
        if len(line) != m:
            raise DimensionMismatch(f"line {lineno}: expected {m} bids, got {len(line)}")
        if set(line) - {"0", "1"}:
            raise ParseError(lineno, f"bids must be 0/1, got {line!r}")
        rows.append(tuple(c == "1" for c in line))
    if len(rows) != k:
        raise DimensionMismatch(f"expected {k} bid rows, got {len(rows)}")
    return BidProfile(tuple(rows))


def serialize_bids(bids: BidProfile) -> str:
    out = [f"{bids.num_agents} {bids.num_items}"]
    for row in bids.bids:
        out.append("".join("1" if b else "0" for b in row))
    return "\n".join(out) + "\n"
