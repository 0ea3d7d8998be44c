from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from onlinefair.core import BidProfile, BudgetExceeded, Instance, sincere_bids
from onlinefair.dist import expected_utilities
from onlinefair.instances import diagonal, manipulable_three_agents, six_items, two_agents_normalized
from onlinefair.mechanisms import MechanismKind
from onlinefair.strategy import (
    ProfileTable,
    best_responses,
    bid_vectors,
    enumerate_pne,
    expected_utility,
    is_pne,
    is_sincere_dominant,
)

from tests.conftest import binary, instances

LIKE, BAL = MechanismKind.LIKE, MechanismKind.BALANCED_LIKE
F = Fraction


def test_expected_utility_manipulation():
    inst = manipulable_three_agents()
    bids = sincere_bids(inst)
    assert expected_utility(BAL, inst, bids, 0) == F(9, 8)
    assert expected_utility(BAL, inst, bids.with_row(0, (False, True, True)), 0) == F(5, 4)
    assert expected_utility(BAL, inst, BidProfile.from_rows([[0] * 3] * 3), 0) == 0


def test_best_response_single_item():
    inst = two_agents_normalized()
    br = best_responses(BAL, inst, sincere_bids(inst), 1, simple=True)
    assert br == [(False, True)]
    assert expected_utility(BAL, inst, sincere_bids(inst).with_row(1, br[0]), 1) == F(3, 4)


def test_best_response_zero_agent_is_empty():
    inst = Instance.from_rows([[0, 0], [1, 1]])
    assert best_responses(BAL, inst, sincere_bids(inst), 0, simple=True) == [(False, False)]


def test_best_response_budget():
    inst = Instance.from_rows([[1] * 6, [1] * 6])
    with pytest.raises(BudgetExceeded):
        best_responses(LIKE, inst, sincere_bids(inst), 0, simple=False, budget=8)


@given(instances(max_agents=3, max_items=4))
def test_like_sincere_is_a_best_response(inst):
    bids = sincere_bids(inst)
    for i in range(inst.num_agents):
        assert bids.bids[i] in best_responses(LIKE, inst, bids, i, simple=False)
        assert bids.bids[i] in best_responses(LIKE, inst, bids, i, simple=True)


@given(instances(max_agents=3, max_items=3))
def test_like_sincere_is_dominant(inst):
    for i in range(inst.num_agents):
        assert is_sincere_dominant(LIKE, inst, i)


@given(instances(max_agents=3, max_items=3))
def test_like_simple_equilibrium_is_sincere(inst):
    assert enumerate_pne(LIKE, inst, simple=True).profiles == [sincere_bids(inst)]


def test_dominance_witness():
    res = is_sincere_dominant(BAL, manipulable_three_agents(), 0)
    assert not res
    assert res.deviation == (False, True, True)
    assert res.deviation_utility > res.sincere_utility
    dev = res.opponents.with_row(0, res.deviation)
    assert expected_utility(BAL, manipulable_three_agents(), dev, 0) == res.deviation_utility


@pytest.mark.slow
def test_two_agent_binary_dominance_exhaustive_m5():
    cols = list(product((0, 1), repeat=2))
    for m in range(1, 6):
        for colset in product(cols, repeat=m):
            rows = [[c[0] for c in colset], [c[1] for c in colset]]
            if rows[0] > rows[1]:
                continue
            inst = Instance.from_rows(rows)
            for i in range(2):
                assert is_sincere_dominant(BAL, inst, i), rows


def test_all_bid_profile_is_like_equilibrium():
    inst = diagonal(2)
    all_bid = BidProfile.from_rows([[1, 1], [1, 1]])
    report = enumerate_pne(LIKE, inst, simple=False)
    assert all_bid in report.profiles


def test_six_items_sincere_agent0_drop_is_not_simple_equilibrium():
    # agent 2 can drop item a without losing expected utility
    inst = six_items()
    claimed = BidProfile.from_rows([[0, 1, 1, 0, 0, 0], [1, 0, 1, 0, 1, 1], [1, 1, 0, 1, 0, 1]])
    assert is_pne(BAL, inst, claimed, simple=True, lexicographic=False)
    assert not is_pne(BAL, inst, claimed, simple=True)
    assert not enumerate_pne(BAL, inst, simple=True).equilibria


def test_profile_table_index_round_trip():
    inst = manipulable_three_agents()
    table = ProfileTable(BAL, inst, simple=True)
    bids = sincere_bids(inst)
    idx = table.index_of(bids)
    assert table.profile(idx) == bids
    assert table.utilities(idx) == expected_utilities(BAL, inst, bids)


@given(instances(max_agents=3, max_items=3))
def test_profile_table_matches_per_profile_dp(inst):
    for kind in MechanismKind:
        table = ProfileTable(kind, inst, simple=False)
        for idx in product(*(range(n) for n in table.shape)):
            profile = table.profile(idx)
            assert table.utilities(idx) == expected_utilities(kind, inst, profile)


@given(instances(max_agents=3, max_items=3, values=binary))
def test_equilibria_recheck_independently(inst):
    for kind in MechanismKind:
        for simple in (True, False):
            for lex in (True, False):
                for eq in enumerate_pne(kind, inst, simple, lexicographic=lex):
                    assert is_pne(kind, inst, eq.profile, simple, lex)
                    if simple:
                        for row, urow in zip(eq.profile.bids, inst.utilities):
                            assert not any(b and u <= 0 for b, u in zip(row, urow))


@given(instances(max_agents=2, max_items=3))
def test_non_equilibria_have_improving_deviation(inst):
    for kind in MechanismKind:
        table = ProfileTable(kind, inst, simple=True)
        mask = table.equilibrium_mask()
        for idx in product(*(range(n) for n in table.shape)):
            assert bool(mask[idx]) == is_pne(kind, inst, table.profile(idx), simple=True)


def test_bid_vector_order():
    rows = list(bid_vectors(3, (0, 2)))
    assert rows == [(False, False, False), (False, False, True), (True, False, False), (True, False, True)]


def test_profile_budget():
    with pytest.raises(BudgetExceeded):
        ProfileTable(BAL, Instance.from_rows([[1] * 6] * 3), simple=False, budget=1000)
