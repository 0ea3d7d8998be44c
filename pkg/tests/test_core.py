from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from onlinefair.core import (
    Allocation,
    BidProfile,
    CountState,
    DimensionMismatch,
    Instance,
    NegativeUtility,
    NotNormalized,
    OutcomeDistribution,
    ParseError,
    parse_bids,
    parse_instance,
    serialize_bids,
    serialize_instance,
    sincere_bids,
    validate_instance,
)
from onlinefair.instances import manipulable_three_agents, two_agents_normalized

from tests.conftest import bid_profiles, instances


def test_sincere_bids_three_agent_instance():
    bids = sincere_bids(manipulable_three_agents())
    assert bids.bids == ((True, True, True), (True, False, True), (False, True, False))


def test_sincere_bids_zero_row():
    bids = sincere_bids(Instance.from_rows([[0, 0, 0], [1, 0, 2]]))
    assert bids.bids[0] == (False, False, False)


def test_sincere_bids_normalized_two_agents():
    assert sincere_bids(two_agents_normalized()).bids == ((True, True), (True, True))


@given(instances())
def test_sincere_bids_is_pure(inst):
    assert sincere_bids(inst) == sincere_bids(inst)
    for row, urow in zip(sincere_bids(inst).bids, inst.utilities):
        assert row == tuple(u > 0 for u in urow)


def test_validate_normalized_ok():
    validate_instance(two_agents_normalized(), require_normalized=True)


def test_validate_not_normalized_reports_agent():
    inst = Instance.from_rows([["1/2", "1/4"], ["1/2", "1/2"]])
    with pytest.raises(NotNormalized) as err:
        validate_instance(inst, require_normalized=True)
    assert err.value.agent == 0


def test_negative_utility_rejected():
    with pytest.raises(NegativeUtility):
        Instance.from_rows([[1, -1]])


def test_normalized_flag_enforced_on_construction():
    with pytest.raises(NotNormalized):
        Instance.from_rows([[1, 1]], normalized=True)


def test_parse_example_instance():
    inst = parse_instance("2 2\n1/2 1/2\n1/4 3/4")
    assert inst == Instance.from_rows([["1/2", "1/2"], ["1/4", "3/4"]])
    assert inst.utilities[1][1] == Fraction(3, 4)


def test_parse_single():
    inst = parse_instance("1 1\n1")
    assert (inst.num_agents, inst.num_items, inst.utilities[0][0]) == (1, 1, 1)


def test_parse_missing_row():
    with pytest.raises(DimensionMismatch):
        parse_instance("2 2\n1 1")


def test_parse_comments_and_errors():
    text = "# header comment\n2 1\n# row 0\n3\n\n1/3\n"
    assert parse_instance(text).utilities == ((3,), (Fraction(1, 3),))
    with pytest.raises(ParseError) as err:
        parse_instance("1 2\n1 x\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_instance("two 2\n")
    with pytest.raises(DimensionMismatch):
        parse_instance("1 2\n1 2 3\n")


@given(instances(values=st.fractions(min_value=0, max_value=50, max_denominator=1000)))
def test_instance_round_trip(inst):
    assert parse_instance(serialize_instance(inst)) == inst


@given(bid_profiles())
def test_bids_round_trip(bids):
    assert parse_bids(serialize_bids(bids)) == bids


def test_parse_bids_format():
    bids = parse_bids("2 3\n101\n010\n")
    assert bids.bidders(0) == (0,) and bids.bidders(1) == (1,)
    with pytest.raises(ParseError):
        parse_bids("1 2\n12\n")


@given(
    st.integers(-10**30, 10**30),
    st.integers(1, 10**30),
    st.integers(-10**30, 10**30),
    st.integers(1, 10**30),
)
def test_rational_addition_matches_cross_multiplication(a, b, c, d):
    total = Fraction(a, b) + Fraction(c, d)
    num, den = a * d + c * b, b * d
    # equal as fractions iff cross products agree
    assert total.numerator * den == num * total.denominator
    assert total.denominator > 0


@given(st.integers(-10**20, 10**20), st.integers(1, 10**20))
def test_rational_lowest_terms(a, b):
    import math

    f = Fraction(a, b)
    assert math.gcd(f.numerator, f.denominator) == 1


def test_outcome_distribution_invariants():
    a, b = Allocation((0,)), Allocation((1,))
    OutcomeDistribution(((a, Fraction(1, 2)), (b, Fraction(1, 2))))
    with pytest.raises(ValueError):
        OutcomeDistribution(((a, Fraction(1, 2)),))
    with pytest.raises(ValueError):
        OutcomeDistribution(((a, Fraction(1, 2)), (a, Fraction(1, 2))))


def test_count_state_invariant():
    CountState((1, 0), 2)
    with pytest.raises(ValueError):
        CountState((2, 1), 2)


def test_bid_profile_helpers():
    bids = BidProfile.from_sets(3, [{0, 2}, {1}])
    assert bids.num_likes(0) == 2
    assert bids.bid_set(1) == frozenset({1})
    assert bids.with_row(1, (True, True, True)).bidders(0) == (0, 1)
    with pytest.raises(DimensionMismatch):
        bids.check_matches(Instance.from_rows([[1, 1]]))


def test_binary_predicate():
    assert Instance.from_rows([[1, 0], [0, 1]]).is_binary
    assert not Instance.from_rows([[2, 0]]).is_binary
