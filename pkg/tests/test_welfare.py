from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from onlinefair.core import Allocation, BidProfile, Instance, sincere_bids
from onlinefair.dist import enumerate_outcomes
from onlinefair.instances import (
    balancing_trap,
    diagonal,
    envy_growth,
    one_picky_agent,
    six_items,
)
from onlinefair.mechanisms import MechanismKind
from onlinefair.strategy import NoEquilibrium
from onlinefair.welfare import (
    EgalitarianMode,
    RatioStatus,
    WelfareKind,
    competitive_ratio,
    envy_report,
    expected_welfare,
    optimal_offline,
    price_of_anarchy,
    ratio,
    welfare_ex_post,
)

from tests.conftest import binary, instance_with_bids, instances

LIKE, BAL = MechanismKind.LIKE, MechanismKind.BALANCED_LIKE
EGAL, UTIL = WelfareKind.EGALITARIAN, WelfareKind.UTILITARIAN
MIN_EXP, EXP_MIN = EgalitarianMode.MIN_OF_EXPECTED, EgalitarianMode.EXPECTED_MIN
F = Fraction


def test_ex_post_welfare():
    inst = balancing_trap(F(1, 100))
    alloc = Allocation((0, 1, 1, 0))
    assert welfare_ex_post(inst, alloc, EGAL) == F(2, 100)
    assert welfare_ex_post(inst, alloc, UTIL) == F(4, 100)
    assert welfare_ex_post(inst, Allocation((None,) * 4), EGAL) == 0
    assert welfare_ex_post(inst, Allocation((None,) * 4), UTIL) == 0
    assert welfare_ex_post(six_items(), Allocation((1, 0, 0, 2, 1, 2)), EGAL) == 2


def test_expected_welfare_all_bid_diagonal():
    inst = diagonal(3)
    all_bid = BidProfile.from_rows([[1] * 3] * 3)
    assert expected_welfare(LIKE, inst, all_bid, EGAL, MIN_EXP) == F(1, 3)
    assert expected_welfare(LIKE, inst, all_bid, UTIL) == 1


def test_expected_min_six_items():
    inst = six_items()
    assert expected_welfare(BAL, inst, sincere_bids(inst), EGAL, EXP_MIN) == F(13, 12)
    claimed = BidProfile.from_rows([[0, 1, 1, 0, 0, 0], [1, 0, 1, 0, 1, 1], [1, 1, 0, 1, 0, 1]])
    assert expected_welfare(BAL, inst, claimed, EGAL, EXP_MIN) == F(9, 8)


def test_single_agent_welfare():
    inst = Instance.from_rows([[0, 5]])
    for mode in EgalitarianMode:
        assert expected_welfare(BAL, inst, sincere_bids(inst), EGAL, mode) == 5
    assert competitive_ratio(LIKE, inst, EGAL) == 1


def test_envy_identical_agents():
    m = 3
    inst = Instance.from_rows([[1] * m, [1] * m])
    rep = envy_report(LIKE, inst, sincere_bids(inst))
    assert rep.ex_post_max[1][0] == m


def test_envy_growth_is_unbounded():
    for p, envy in ((3, 1), (10, 8)):
        inst = envy_growth(p)
        assert envy_report(BAL, inst, sincere_bids(inst)).ex_ante[1][0] == envy


def test_envy_single_agent():
    inst = Instance.from_rows([[1, 2]])
    rep = envy_report(BAL, inst, sincere_bids(inst))
    assert rep.ex_ante == ((0,),) and rep.ex_post_max == ((0,),)


def test_one_item_never_envy_free_ex_post():
    inst = Instance.from_rows([[1], [1]])
    for kind in MechanismKind:
        assert envy_report(kind, inst, sincere_bids(inst)).max_ex_post > 0


@given(instances(max_agents=3, max_items=5))
def test_like_envy_free_ex_ante(inst):
    assert envy_report(LIKE, inst, sincere_bids(inst)).envy_free_ex_ante


@pytest.mark.slow
def test_balanced_binary_envy_exhaustive():
    for k in (1, 2, 3):
        for m in range(1, 6):
            for rows in product(product((0, 1), repeat=m), repeat=k):
                if list(rows) != sorted(rows):
                    continue
                inst = Instance.from_rows(rows)
                rep = envy_report(BAL, inst, sincere_bids(inst))
                assert rep.envy_free_ex_ante, rows
                assert rep.max_ex_post <= 1, rows


def test_optimum_values():
    assert optimal_offline(one_picky_agent(3), EGAL)[1] == 3
    trap = balancing_trap(F(1, 100))
    assert optimal_offline(trap, EGAL)[1] == F(99, 100)
    # eps + (1 - 2eps) + eps + (1 - 2eps) = 2 - 2eps
    assert optimal_offline(trap, UTIL)[1] == F(99, 50)


@given(instances(max_agents=3, max_items=4, values=binary))
def test_binary_utilitarian_optimum_counts_liked_items(inst):
    liked = sum(1 for j in range(inst.num_items) if inst.likers(j))
    assert optimal_offline(inst, UTIL)[1] == liked


@given(instances(max_agents=3, max_items=4))
def test_egalitarian_optimum_matches_brute_force(inst):
    best = max(
        min(inst.bundle_value(i, Allocation(owner).bundle(i)) for i in range(inst.num_agents))
        for owner in product(range(inst.num_agents), repeat=inst.num_items)
    )
    alloc, value = optimal_offline(inst, EGAL)
    assert value == best
    assert welfare_ex_post(inst, alloc, EGAL) == best


@given(instance_with_bids(max_agents=3, max_items=4))
def test_utilitarian_optimum_bounds_expected_welfare(case):
    inst, bids = case
    opt = optimal_offline(inst, UTIL)[1]
    for kind in MechanismKind:
        assert expected_welfare(kind, inst, bids, UTIL) <= opt


def test_competitive_ratios():
    assert competitive_ratio(LIKE, one_picky_agent(3), EGAL, MIN_EXP) == 3
    assert competitive_ratio(BAL, balancing_trap(F(1, 100)), EGAL, MIN_EXP) == F(99, 2)


def test_ratio_statuses():
    assert ratio(F(1), F(0)) is RatioStatus.UNBOUNDED
    assert ratio(F(0), F(0)) is RatioStatus.UNDEFINED
    inst = Instance.from_rows([[1, 0], [0, 0]])
    assert competitive_ratio(LIKE, inst, EGAL) is RatioStatus.UNDEFINED


@given(instances(max_agents=3, max_items=4, values=binary))
def test_binary_sincere_outcomes_are_utilitarian_optimal(inst):
    opt = optimal_offline(inst, UTIL)[1]
    for kind in MechanismKind:
        for alloc, _ in enumerate_outcomes(kind, sincere_bids(inst)):
            assert welfare_ex_post(inst, alloc, UTIL) == opt


@given(instances(max_agents=3, max_items=3, values=binary))
def test_binary_utilitarian_poa_is_one(inst):
    for kind in MechanismKind:
        try:
            poa = price_of_anarchy(kind, inst, UTIL)
        except NoEquilibrium:
            continue
        if poa.optimum > 0:
            assert poa.worst == poa.best == 1


@given(instances(max_agents=3, max_items=3))
def test_best_equilibrium_no_worse_than_worst(inst):
    try:
        poa = price_of_anarchy(BAL, inst, EGAL, lexicographic=False)
    except NoEquilibrium:
        return
    assert poa.best_welfare >= poa.worst_welfare


def test_one_picky_agent_poa_without_tie_break():
    poa = price_of_anarchy(BAL, one_picky_agent(3), EGAL, MIN_EXP, lexicographic=False)
    assert poa.worst == 3


def test_no_equilibrium_raised():
    with pytest.raises(NoEquilibrium):
        price_of_anarchy(BAL, six_items(), EGAL, EXP_MIN)
