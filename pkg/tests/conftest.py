from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from onlinefair.core import BidProfile, Instance

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_rationals = st.fractions(min_value=0, max_value=3, max_denominator=6)
binary = st.sampled_from([Fraction(0), Fraction(1)])


@st.composite
def instances(draw, max_agents=3, max_items=4, values=small_rationals):
    k = draw(st.integers(1, max_agents))
    m = draw(st.integers(1, max_items))
    rows = draw(st.lists(st.lists(values, min_size=m, max_size=m), min_size=k, max_size=k))
    return Instance.from_rows(rows)


@st.composite
def bid_profiles(draw, max_agents=3, max_items=5):
    k = draw(st.integers(1, max_agents))
    m = draw(st.integers(1, max_items))
    rows = draw(st.lists(st.lists(st.booleans(), min_size=m, max_size=m), min_size=k, max_size=k))
    return BidProfile.from_rows(rows)


@st.composite
def instance_with_bids(draw, max_agents=3, max_items=4, values=small_rationals):
    inst = draw(instances(max_agents, max_items, values))
    rows = draw(
        st.lists(
            st.lists(st.booleans(), min_size=inst.num_items, max_size=inst.num_items),
            min_size=inst.num_agents,
            max_size=inst.num_agents,
        )
    )
    return inst, BidProfile.from_rows(rows)


def pytest_terminal_summary(terminalreporter):
    try:
        from tests import test_acceptance
    except ImportError:
        try:
            import test_acceptance
        except ImportError:
            return
    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(test_acceptance.RESULTS):
        status, desc = test_acceptance.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status:7s} {desc}")
