"""Exact values on the hand-built instances in onlinefair.instances.

Prints each quantity next to the value the construction is designed to show,
so deviations stand out.
"""
from fractions import Fraction

from onlinefair import instances
from onlinefair.core import BidProfile, sincere_bids
from onlinefair.dist import balanced_like_dp, expected_utilities
from onlinefair.mechanisms import MechanismKind
from onlinefair.strategy import NoEquilibrium, enumerate_pne, is_pne, is_sincere_dominant
from onlinefair.welfare import EgalitarianMode, WelfareKind, competitive_ratio, expected_welfare, price_of_anarchy

LIKE, BAL = MechanismKind.LIKE, MechanismKind.BALANCED_LIKE
EGAL, UTIL = WelfareKind.EGALITARIAN, WelfareKind.UTILITARIAN
MIN_EXP, EXP_MIN = EgalitarianMode.MIN_OF_EXPECTED, EgalitarianMode.EXPECTED_MIN


def show(label, got, want):
    mark = "ok " if got == want else "DIFF"
    print(f"[{mark}] {label}: {got} (target {want})")


def poa(kind, inst, welfare, lexicographic):
    try:
        return price_of_anarchy(kind, inst, welfare, MIN_EXP, lexicographic=lexicographic).worst
    except NoEquilibrium:
        return "no simple equilibrium"


def main():
    inst = instances.manipulable_three_agents()
    bids = sincere_bids(inst)
    show("manipulation, sincere EU", expected_utilities(BAL, inst, bids)[0], Fraction(9, 8))
    show("manipulation, bid {b,c}", expected_utilities(BAL, inst, bids.with_row(0, (0, 1, 1)))[0], Fraction(5, 4))
    res = is_sincere_dominant(BAL, inst, 0)
    print(f"       dominance witness: opponents {res.opponents.bids[1:]}, deviation {res.deviation}")

    inst = instances.two_agents_normalized()
    bids = sincere_bids(inst)
    show("normalized, agent 1 sincere", expected_utilities(BAL, inst, bids)[1], Fraction(1, 2))
    show("normalized, agent 1 bids {b}", expected_utilities(BAL, inst, bids.with_row(1, (0, 1)))[1], Fraction(3, 4))

    for k in (2, 3, 4):
        inst = instances.diagonal(k)
        all_bid = BidProfile.from_rows([[1] * k] * k)
        for kind in (LIKE, BAL):
            show(f"diagonal k={k} {kind.value}: all-bid is an equilibrium", is_pne(kind, inst, all_bid, False), True)

    inst = instances.six_items()
    claimed = BidProfile.from_rows(instances.six_items_claimed_equilibrium())
    show("six items, sincere expected-min", expected_welfare(BAL, inst, sincere_bids(inst), EGAL, EXP_MIN), Fraction(13, 12))
    show("six items, claimed equilibrium expected-min", expected_welfare(BAL, inst, claimed, EGAL, EXP_MIN), Fraction(9, 8))
    for lex in (True, False):
        n = len(enumerate_pne(BAL, inst, simple=True, lexicographic=lex))
        show(f"six items, simple equilibria (tie-break {'on' if lex else 'off'})", n, 1)

    show("one picky agent, Like egalitarian ratio", competitive_ratio(LIKE, instances.one_picky_agent(3), EGAL), 3)
    for eps, want in ((Fraction(1, 100), Fraction(99, 2)), (Fraction(1, 1000), Fraction(999, 2))):
        show(f"balancing trap eps={eps}", competitive_ratio(BAL, instances.balancing_trap(eps), EGAL), want)

    near = instances.near_diagonal(3, Fraction(1, 100))
    p, _ = balanced_like_dp(near, sincere_bids(near))
    show("near diagonal, P(i gets i)", {p[i][i] for i in range(3)}, {Fraction(1, 3)})
    for lex in (True, False):
        tag = "on" if lex else "off"
        show(f"one picky agent, egalitarian worst PoA (tie-break {tag})",
             poa(BAL, instances.one_picky_agent(3), EGAL, lex), 3)
        show(f"near diagonal, utilitarian worst PoA (tie-break {tag})", poa(BAL, near, UTIL, lex), Fraction(147, 50))


if __name__ == "__main__":
    main()
