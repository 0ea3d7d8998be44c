"""Exact analysis of the Like and Balanced Like online fair-division mechanisms."""
from onlinefair.core import (
    Allocation,
    BidProfile,
    BudgetExceeded,
    FairDivisionError,
    Instance,
    OutcomeDistribution,
    parse_bids,
    parse_instance,
    serialize_bids,
    serialize_instance,
    sincere_bids,
)
from onlinefair.mechanisms import MechanismKind

LIKE = MechanismKind.LIKE
BALANCED_LIKE = MechanismKind.BALANCED_LIKE

__all__ = [
    "Allocation",
    "BidProfile",
    "BudgetExceeded",
    "FairDivisionError",
    "Instance",
    "OutcomeDistribution",
    "MechanismKind",
    "LIKE",
    "BALANCED_LIKE",
    "parse_bids",
    "parse_instance",
    "serialize_bids",
    "serialize_instance",
    "sincere_bids",
]
