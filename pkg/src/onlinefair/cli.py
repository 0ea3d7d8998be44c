"""Command-line entry point: ``onlinefair <subcommand> ...``.

Exit codes: 0 success, 1 usage or input error, 2 budget exhausted.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from onlinefair import bench
from onlinefair.core import (
    BudgetExceeded,
    FairDivisionError,
    parse_bids,
    parse_instance,
    serialize_instance,
    sincere_bids,
)
from onlinefair.dist import enumerate_outcomes, expected_utilities, item_probabilities
from onlinefair.mechanisms import MechanismKind, run
from onlinefair.strategy import DEFAULT_PROFILE_BUDGET, NoEquilibrium, enumerate_pne
from onlinefair.welfare import (
    EgalitarianMode,
    RatioStatus,
    WelfareKind,
    competitive_ratio,
    expected_welfare,
    price_of_anarchy,
)

EXIT_USAGE = 1
EXIT_BUDGET = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(r) -> str:
    if isinstance(r, RatioStatus):
        return r.value
    return f"{r} ({float(r):.6f})"


def _load(args):
    inst = parse_instance(Path(args.instance).read_text())
    bids = parse_bids(Path(args.bids).read_text()) if getattr(args, "bids", None) else sincere_bids(inst)
    bids.check_matches(inst)
    return inst, bids


def cmd_run(args) -> int:
    _, bids = _load(args)
    alloc = run(MechanismKind.parse(args.mechanism), bids, args.seed)
    for j, o in enumerate(alloc.owner):
        print(f"{j} -> {'none' if o is None else o}")
    return 0


def cmd_dist(args) -> int:
    inst, bids = _load(args)
    kind = MechanismKind.parse(args.mechanism)
    p = item_probabilities(kind, inst, bids)
    eu = expected_utilities(kind, inst, bids)
    if args.csv:
        print("agent," + ",".join(f"item{j}" for j in range(inst.num_items)) + ",expected_utility")
        for i, row in enumerate(p):
            print(",".join([str(i)] + [str(x) for x in row] + [str(eu[i])]))
        return 0
    print("item probabilities (rows: agents, columns: items)")
    for i, row in enumerate(p):
        print(f"  agent {i}: " + " ".join(f"{str(x):>6}" for x in row))
    print("expected utilities")
    for i, v in enumerate(eu):
        print(f"  agent {i}: {_frac(v)}")
    if args.outcomes:
        print("outcomes")
        for alloc, prob in enumerate_outcomes(kind, bids):
            owners = " ".join("-" if o is None else str(o) for o in alloc.owner)
            print(f"  {owners}  p={prob}")
    return 0


def cmd_nash(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    kind = MechanismKind.parse(args.mechanism)
    report = enumerate_pne(kind, inst, args.simple, args.budget, lexicographic=not args.no_lexicographic)
    print(f"{len(report)} equilibria among {report.profiles_searched} profiles")
    for n, eq in enumerate(report):
        print(f"equilibrium {n}")
        for i, row in enumerate(eq.profile.bids):
            print(f"  agent {i}: " + "".join("1" if b else "0" for b in row) + f"  EU={eq.utilities[i]}")
        print(f"  utilitarian={eq.utilitarian} egal(min-exp)={eq.min_of_expected} egal(exp-min)={eq.expected_min}")
    return 0


def cmd_welfare(args) -> int:
    inst, bids = _load(args)
    w = expected_welfare(
        MechanismKind.parse(args.mechanism), inst, bids, WelfareKind(args.kind), EgalitarianMode(args.mode)
    )
    print(_frac(w))
    return 0


def cmd_ratio(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    r = competitive_ratio(MechanismKind.parse(args.mechanism), inst, WelfareKind(args.kind), EgalitarianMode(args.mode))
    print(_frac(r))
    return 0


def cmd_poa(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    try:
        poa = price_of_anarchy(
            MechanismKind.parse(args.mechanism),
            inst,
            WelfareKind(args.kind),
            EgalitarianMode(args.mode),
            budget=args.budget,
            lexicographic=not args.no_lexicographic,
        )
    except NoEquilibrium:
        print("no simple pure Nash equilibrium")
        return 0
    print(f"optimum: {_frac(poa.optimum)}")
    print(f"worst:   {_frac(poa.worst)}")
    print(f"best:    {_frac(poa.best)}")
    print(f"equilibria: {len(poa.report)}")
    return 0


def cmd_gen(args) -> int:
    spec = bench.GeneratorSpec(
        bench.Family(args.family), args.k, args.m, args.seed, Fraction(args.p), Fraction(args.alpha)
    )
    text = serialize_instance(bench.generate(spec))
    text = f"# family={args.family} seed={args.seed} p={args.p} alpha={args.alpha}\n" + text
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return 0


def cmd_experiment(args) -> int:
    ks, ms = bench.parse_grid(args.grid)
    cfg = bench.ExperimentConfig(
        ks=ks,
        ms=ms,
        samples=args.samples,
        master_seed=args.master_seed,
        family=bench.Family(args.family),
        like_probability=Fraction(args.p),
        alpha=Fraction(args.alpha),
        welfare=WelfareKind(args.kind),
        mode=EgalitarianMode(args.mode),
        profile_budget=args.budget,
        lexicographic=not args.no_lexicographic,
    )
    rows = bench.run_experiment(cfg)
    Path(args.csv).write_text(bench.rows_to_csv(rows, cfg.metadata()))
    summaries = bench.summarize(rows)
    if args.plot_data:
        Path(args.plot_data).write_text(bench.plot_data(summaries))
    for c in summaries:
        means = " ".join(
            f"{s}={'-' if c.means[s] is None else f'{c.means[s]:.4f}'}" for s in bench.SERIES
        )
        print(f"k={c.k} m={c.m} {means}")
    for c in bench.trend_violations(summaries):
        print(f"FLAG: balanced worse than like at k={c.k} m={c.m}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="onlinefair", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def mech(sp, bids=True):
        sp.add_argument("--mechanism", required=True, choices=["like", "balanced"])
        sp.add_argument("--instance", required=True)
        if bids:
            sp.add_argument("--bids", help="bid profile file; sincere bids if omitted")

    def kinds(sp):
        sp.add_argument("--kind", choices=["egal", "util"], default="egal")
        sp.add_argument("--mode", choices=["min-exp", "exp-min"], default="min-exp")

    sp = sub.add_parser("run", help="one seeded run of a mechanism")
    mech(sp)
    sp.add_argument("--seed", type=int, required=True)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("dist", help="exact item probabilities and expected utilities")
    mech(sp)
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--outcomes", action="store_true", help="also list the full outcome distribution")
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("nash", help="enumerate pure Nash equilibria")
    mech(sp, bids=False)
    sp.add_argument("--simple", action="store_true")
    sp.add_argument("--budget", type=int, default=DEFAULT_PROFILE_BUDGET)
    sp.add_argument("--no-lexicographic", action="store_true", help="drop the fewer-likes tie-break")
    sp.set_defaults(func=cmd_nash)

    sp = sub.add_parser("welfare", help="expected welfare of a bid profile")
    mech(sp)
    kinds(sp)
    sp.set_defaults(func=cmd_welfare)

    sp = sub.add_parser("ratio", help="competitive ratio under sincere bids")
    mech(sp, bids=False)
    kinds(sp)
    sp.set_defaults(func=cmd_ratio)

    sp = sub.add_parser("poa", help="price of anarchy over simple equilibria")
    mech(sp, bids=False)
    kinds(sp)
    sp.add_argument("--budget", type=int, default=DEFAULT_PROFILE_BUDGET)
    sp.add_argument("--no-lexicographic", action="store_true")
    sp.set_defaults(func=cmd_poa)

    families = [f.value for f in bench.Family]
    sp = sub.add_parser("gen", help="generate a random instance")
    sp.add_argument("--family", choices=families, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--alpha", default="1/2")
    sp.add_argument("--p", default="1/2")
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("experiment", help="competitive ratio / price of anarchy sweep")
    sp.add_argument("--grid", default="k=2..3,m=2..6")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--master-seed", type=int, default=0)
    sp.add_argument("--family", choices=families, default="random01")
    sp.add_argument("--p", default="1/2")
    sp.add_argument("--alpha", default="1/2")
    kinds(sp)
    sp.add_argument("--budget", type=int, default=DEFAULT_PROFILE_BUDGET)
    sp.add_argument("--no-lexicographic", action="store_true")
    sp.add_argument("--csv", required=True)
    sp.add_argument("--plot-data")
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FairDivisionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
