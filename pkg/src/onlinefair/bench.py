"""Instance generators and the competitive-ratio / price-of-anarchy sweep.

Rows are emitted per instance; aggregation (geometric means) happens
afterwards so it can be audited. Floats appear only in aggregates and plot
data.
"""
from __future__ import annotations

import csv
import enum
import io
import logging
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from onlinefair.core import BudgetExceeded, FairDivisionError, Instance
from onlinefair.mechanisms import MechanismKind
from onlinefair.strategy import DEFAULT_PROFILE_BUDGET, NoEquilibrium
from onlinefair.welfare import (
    EgalitarianMode,
    Ratio,
    RatioStatus,
    WelfareKind,
    competitive_ratio,
    optimal_offline,
    price_of_anarchy,
)

log = logging.getLogger(__name__)

CSV_HEADER = [
    "k",
    "m",
    "instance_id",
    "like_ratio",
    "balanced_ratio",
    "balanced_worst_poa",
    "balanced_best_ratio",
    "skipped_reason",
]
SERIES = ("like_ratio", "balanced_ratio", "balanced_worst_poa", "balanced_best_ratio")


class NonPositiveValue(FairDivisionError):
    pass


class Family(enum.Enum):
    RANDOM01 = "random01"
    BORDA = "borda"
    POLYA01 = "polya01"
    POLYA_BORDA = "polya-borda"


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    k: int
    m: int
    seed: int
    like_probability: Fraction = Fraction(1, 2)  # RANDOM01
    alpha: Fraction = Fraction(1, 2)  # POLYA_BORDA copy probability


def _bernoulli(rng: np.random.Generator, p: Fraction) -> bool:
    p = Fraction(p)
    return int(rng.integers(p.denominator)) < p.numerator


def generate(spec: GeneratorSpec) -> Instance:
    if spec.k < 1 or spec.m < 1:
        raise ValueError("k and m must be positive")
    if not 0 <= spec.like_probability <= 1 or not 0 <= spec.alpha <= 1:
        raise ValueError("probabilities must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    k, m = spec.k, spec.m
    fam = spec.family
    if fam is Family.RANDOM01:
        rows = [[int(_bernoulli(rng, spec.like_probability)) for _ in range(m)] for _ in range(k)]
    elif fam is Family.BORDA:
        rows = [[int(x) for x in rng.permutation(m)] for _ in range(k)]
    elif fam is Family.POLYA01:
        rows = [[0] * m for _ in range(k)]
        for j in range(m):
            likers = 0
            for i in range(k):
                # urn with one "like" and one "dislike" ball, reinforced by each draw
                if int(rng.integers(2 + i)) < 1 + likers:
                    rows[i][j] = 1
                    likers += 1
    elif fam is Family.POLYA_BORDA:
        rows = []
        for i in range(k):
            if i and _bernoulli(rng, spec.alpha):
                rows.append(list(rows[int(rng.integers(i))]))
            else:
                rows.append([int(x) for x in rng.permutation(m)])
    else:
        raise ValueError(fam)
    return Instance.from_rows(rows)


def instance_seed(master_seed: int, k: int, m: int, instance_id: int) -> int:
    ss = np.random.SeedSequence([master_seed, k, m, instance_id])
    return int(ss.generate_state(1, np.uint64)[0])


# --- sweep ------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    ks: Sequence[int] = (2, 3)
    ms: Sequence[int] = (2, 3, 4, 5, 6)
    samples: int = 100
    master_seed: int = 0
    family: Family = Family.RANDOM01
    like_probability: Fraction = Fraction(1, 2)
    alpha: Fraction = Fraction(1, 2)
    welfare: WelfareKind = WelfareKind.EGALITARIAN
    mode: EgalitarianMode = EgalitarianMode.MIN_OF_EXPECTED
    profile_budget: int = DEFAULT_PROFILE_BUDGET
    node_budget: int = 10**6
    lexicographic: bool = True

    def metadata(self) -> dict[str, str]:
        d = asdict(self)
        d["ks"] = ",".join(map(str, self.ks))
        d["ms"] = ",".join(map(str, self.ms))
        for key in ("family", "welfare", "mode"):
            d[key] = d[key].value
        return {key: str(v) for key, v in d.items()}


@dataclass
class ExperimentRow:
    k: int
    m: int
    instance_id: int
    like_ratio: Optional[Ratio] = None
    balanced_ratio: Optional[Ratio] = None
    balanced_worst_poa: Optional[Ratio] = None
    balanced_best_ratio: Optional[Ratio] = None
    skipped_reason: str = ""
    instance: Optional[Instance] = field(default=None, repr=False, compare=False)

    def decimals(self) -> dict[str, Optional[float]]:
        return {s: ratio_to_float(getattr(self, s)) for s in SERIES}

    def csv_fields(self) -> list[str]:
        return [str(self.k), str(self.m), str(self.instance_id)] + [
            format_ratio(getattr(self, s)) for s in SERIES
        ] + [self.skipped_reason]


def format_ratio(r: Optional[Ratio]) -> str:
    if r is None:
        return ""
    if isinstance(r, RatioStatus):
        return r.value
    return str(r)


def parse_ratio(text: str) -> Optional[Ratio]:
    if not text:
        return None
    for status in RatioStatus:
        if text == status.value:
            return status
    return Fraction(text)


def ratio_to_float(r: Optional[Ratio]) -> Optional[float]:
    if r is None or isinstance(r, RatioStatus):
        return None
    return float(r)


def evaluate_instance(inst: Instance, cfg: ExperimentConfig, k: int, m: int, instance_id: int) -> ExperimentRow:
    row = ExperimentRow(k, m, instance_id, instance=inst)
    try:
        _, opt = optimal_offline(inst, cfg.welfare, cfg.node_budget)
    except BudgetExceeded:
        row.skipped_reason = "budget:optimum"
        return row
    if opt == 0:
        row.skipped_reason = "opt_zero"
        return row
    row.like_ratio = competitive_ratio(MechanismKind.LIKE, inst, cfg.welfare, cfg.mode, optimum=opt)
    row.balanced_ratio = competitive_ratio(MechanismKind.BALANCED_LIKE, inst, cfg.welfare, cfg.mode, optimum=opt)
    try:
        poa = price_of_anarchy(
            MechanismKind.BALANCED_LIKE,
            inst,
            cfg.welfare,
            cfg.mode,
            budget=cfg.profile_budget,
            lexicographic=cfg.lexicographic,
            optimum=opt,
        )
    except NoEquilibrium:
        row.skipped_reason = "no_equilibrium"
    except BudgetExceeded:
        row.skipped_reason = "budget:equilibria"
    else:
        row.balanced_worst_poa = poa.worst
        row.balanced_best_ratio = poa.best
    return row


def run_experiment(cfg: ExperimentConfig, instances: Optional[dict] = None) -> list[ExperimentRow]:
    """One row per sampled instance, ordered by (k, m, instance_id).

    ``instances`` may map (k, m, id) to a fixed Instance, overriding the
    generator for that slot.
    """
    rows = []
    for k in cfg.ks:
        for m in cfg.ms:
            for n in range(cfg.samples):
                inst = (instances or {}).get((k, m, n))
                if inst is None:
                    spec = GeneratorSpec(
                        cfg.family, k, m, instance_seed(cfg.master_seed, k, m, n), cfg.like_probability, cfg.alpha
                    )
                    inst = generate(spec)
                rows.append(evaluate_instance(inst, cfg, k, m, n))
            log.info("k=%d m=%d done", k, m)
    return rows


def geometric_mean(values: Iterable[Fraction]) -> float:
    values = list(values)
    if not values:
        raise ValueError("geometric mean of no values")
    logs = []
    for v in values:
        v = Fraction(v)
        if v <= 0:
            raise NonPositiveValue(f"geometric mean needs positive values, got {v}")
        # log of numerator and denominator separately so huge fractions don't overflow
        logs.append(math.log(v.numerator) - math.log(v.denominator))
    return math.exp(math.fsum(logs) / len(logs))


@dataclass
class CellSummary:
    k: int
    m: int
    means: dict[str, Optional[float]]
    counts: dict[str, int]
    excluded: dict[str, int]  # unbounded/undefined/missing values per series


def summarize(rows: Sequence[ExperimentRow]) -> list[CellSummary]:
    cells = defaultdict(list)
    for r in rows:
        cells[(r.k, r.m)].append(r)
    out = []
    for (k, m), cell in sorted(cells.items()):
        means, counts, excluded = {}, {}, {}
        for s in SERIES:
            vals = [getattr(r, s) for r in cell]
            good = [v for v in vals if isinstance(v, Fraction)]
            means[s] = geometric_mean(good) if good else None
            counts[s] = len(good)
            excluded[s] = len(vals) - len(good)
        out.append(CellSummary(k, m, means, counts, excluded))
    return out


def trend_violations(summaries: Sequence[CellSummary]) -> list[CellSummary]:
    """Cells where Balanced Like's mean ratio is worse than Like's."""
    bad = []
    for c in summaries:
        like, bal = c.means["like_ratio"], c.means["balanced_ratio"]
        if like is not None and bal is not None and bal > like:
            bad.append(c)
    return bad


def rows_to_csv(rows: Sequence[ExperimentRow], metadata: Optional[dict[str, str]] = None) -> str:
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key}={value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ExperimentRow]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        rows.append(
            ExperimentRow(
                int(rec["k"]),
                int(rec["m"]),
                int(rec["instance_id"]),
                *(parse_ratio(rec[s]) for s in SERIES),
                skipped_reason=rec["skipped_reason"],
            )
        )
    return rows


def plot_data(summaries: Sequence[CellSummary]) -> str:
    """Whitespace-separated columns: k, m, then one geometric mean per series."""
    lines = ["# k m like balanced balanced- balanced+"]
    for c in summaries:
        vals = ["nan" if c.means[s] is None else f"{c.means[s]:.6f}" for s in SERIES]
        lines.append(" ".join([str(c.k), str(c.m)] + vals))
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> tuple[list[int], list[int]]:
    """Parse ``"k=2..5,m=2..10"``; single values and ``a..b`` ranges are accepted."""
    found: dict[str, list[int]] = {}
    for part in text.split(","):
        name, _, rng = part.strip().partition("=")
        name = name.strip()
        if name not in ("k", "m") or not rng:
            raise ValueError(f"bad grid component {part!r}")
        lo, sep, hi = rng.partition("..")
        values = list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]
        if not values or min(values) < 1:
            raise ValueError(f"empty or non-positive range in {part!r}")
        found[name] = values
    if set(found) != {"k", "m"}:
        raise ValueError("grid needs both k and m")
    return found["k"], found["m"]
