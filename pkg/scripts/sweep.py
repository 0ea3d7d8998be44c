"""Competitive ratio / price of anarchy sweep over random instances.

Writes per-instance rows to a CSV and geometric means per (k, m) cell to a
whitespace-separated plot file. Cells where Balanced Like does worse than
Like on average are printed to stderr.

    python3 scripts/sweep.py --grid k=2..3,m=2..6 --samples 100 --out results/
"""
import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from onlinefair import bench
from onlinefair.welfare import EgalitarianMode, WelfareKind


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grid", default="k=2..3,m=2..6")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--family", default="random01", choices=[f.value for f in bench.Family])
    p.add_argument("--kind", default="egal", choices=["egal", "util"])
    p.add_argument("--mode", default="min-exp", choices=["min-exp", "exp-min"])
    p.add_argument("--no-lexicographic", action="store_true")
    p.add_argument("--out", default="results")
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    ks, ms = bench.parse_grid(args.grid)
    cfg = bench.ExperimentConfig(
        ks=ks,
        ms=ms,
        samples=args.samples,
        master_seed=args.master_seed,
        family=bench.Family(args.family),
        welfare=WelfareKind(args.kind),
        mode=EgalitarianMode(args.mode),
        lexicographic=not args.no_lexicographic,
    )
    rows = bench.run_experiment(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{args.family}_{args.kind}_{args.mode}_seed{args.master_seed}"
    (out / f"{stem}.csv").write_text(bench.rows_to_csv(rows, cfg.metadata()))
    cells = bench.summarize(rows)
    (out / f"{stem}.dat").write_text(bench.plot_data(cells))

    print(f"{'k':>3} {'m':>3}  " + "  ".join(f"{s:>20}" for s in bench.SERIES) + "  skipped")
    for c in cells:
        vals = ["-" if c.means[s] is None else f"{c.means[s]:.4f} (n={c.counts[s]})" for s in bench.SERIES]
        skipped = sum(1 for r in rows if (r.k, r.m) == (c.k, c.m) and r.skipped_reason)
        print(f"{c.k:>3} {c.m:>3}  " + "  ".join(f"{v:>20}" for v in vals) + f"  {skipped}")
    for c in bench.trend_violations(cells):
        print(f"FLAG k={c.k} m={c.m}: balanced {c.means['balanced_ratio']:.4f} > like {c.means['like_ratio']:.4f}",
              file=sys.stderr)


if __name__ == "__main__":
    main()
