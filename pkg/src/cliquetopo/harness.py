"""Seeded Monte Carlo experiments over (n, alpha) cells.

Each trial samples G(n, n**alpha) with seed ``derive_seed(base_seed, n,
alpha_index, trial)``, computes the enabled metrics and yields a
``TrialRecord``.  Cells are summarized as frequencies with binomial
standard errors.  CSV column order is fixed; ``wall_time_s`` is the only
timing column and the only one allowed to differ between reruns.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .collapse import freeness_certificate, replay
from .complex import Complex, clique_complex, clique_dimension
from .cycles import classify_minimal_cycle, extract_minimal_cycle, find_small_bubble, odd_torsion_screen
from .graph import derive_seed, p_from_alpha, sample_gnp
from .homology import GF2, Q, betti
from .patterns import PatternError, count_embeddings, get_pattern, host_arrays

SCHEMA_VERSION = 1

BASE_METRICS = ("dimension", "betti_gf2", "betti_q", "collapse", "minimal_cycle", "bubble", "odd_torsion_screen")

TIMING_COLUMNS = ("wall_time_s",)
TRIAL_COLUMNS = ("schema", "n", "alpha", "alpha_index", "trial", "seed", "status", "error")
SUMMARY_COLUMNS = ("n", "alpha", "metric", "statistic", "value", "se", "trials_used", "excluded", "proxy")


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep.  ``metrics`` holds names from ``BASE_METRICS`` and
    ``patterns:<a>+<b>`` entries.  ``embed_cap`` 1 means containment only,
    0 means full counts.  ``time_budget`` bounds each pattern search in
    seconds (over-budget trials become ``timeout``).
    """

    n_values: tuple[int, ...]
    alpha_values: tuple[float, ...]
    trials: int = 10
    base_seed: int = 0
    metrics: tuple[str, ...] = ()
    dim_cap: int = 3
    embed_cap: int = 1
    bubble_cap: int = 12
    time_budget: float | None = None
    check_collapse_betti: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ConfigError("n values must be positive")
        if not self.alpha_values or any(not a < 0 for a in self.alpha_values):
            raise ConfigError("alpha values must be negative")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not 1 <= self.dim_cap <= 5:
            raise ConfigError("dim_cap must be in 1..5")
        if self.embed_cap < 0 or self.bubble_cap < 0 or self.workers < 1:
            raise ConfigError("caps must be non-negative and workers positive")
        for m in self.metrics:
            if m.startswith("patterns:"):
                names = self.pattern_names_of(m)
                if not names:
                    raise ConfigError(f"metric {m!r} names no pattern")
                for name in names:
                    try:
                        get_pattern(name)
                    except PatternError as exc:
                        raise ConfigError(str(exc)) from None
            elif m not in BASE_METRICS:
                raise ConfigError(f"unknown metric {m!r}")

    @staticmethod
    def pattern_names_of(metric: str) -> list[str]:
        return [s for s in metric[len("patterns:"):].split("+") if s]

    @property
    def pattern_names(self) -> list[str]:
        out: list[str] = []
        for m in self.metrics:
            if m.startswith("patterns:"):
                out += [s for s in self.pattern_names_of(m) if s not in out]
        return out

    def to_text(self) -> str:
        vals = {
            "n": ", ".join(map(str, self.n_values)),
            "alpha": ", ".join(repr(a) for a in self.alpha_values),
            "trials": self.trials,
            "seed": self.base_seed,
            "metrics": ", ".join(self.metrics),
            "dim_cap": self.dim_cap,
            "embed_cap": self.embed_cap,
            "bubble_cap": self.bubble_cap,
            "time_budget": "none" if self.time_budget is None else self.time_budget,
            "check_collapse_betti": str(self.check_collapse_betti).lower(),
            "workers": self.workers,
        }
        return "".join(f"{k} = {v}\n" for k, v in vals.items())


_KEYS = {
    "n": "n_values", "alpha": "alpha_values", "trials": "trials", "seed": "base_seed",
    "metrics": "metrics", "dim_cap": "dim_cap", "embed_cap": "embed_cap", "bubble_cap": "bubble_cap",
    "time_budget": "time_budget", "check_collapse_betti": "check_collapse_betti", "workers": "workers",
}


def _list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def parse_config(text: str, overrides: dict | None = None) -> ExperimentConfig:
    """Parse ``key = value`` lines (``#`` comments, comma-separated lists).

    Keys: n, alpha, trials, seed, metrics, dim_cap, embed_cap, bubble_cap,
    time_budget (seconds or ``none``), check_collapse_betti, workers.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = value
    kw: dict = {}
    try:
        for key, value in raw.items():
            name = _KEYS[key]
            if key == "n":
                kw[name] = tuple(int(s) for s in _list(value))
            elif key == "alpha":
                kw[name] = tuple(float(s) for s in _list(value))
            elif key == "metrics":
                kw[name] = tuple(_list(value))
            elif key == "time_budget":
                kw[name] = None if value.lower() == "none" else float(value)
            elif key == "check_collapse_betti":
                kw[name] = _bool(value)
            else:
                kw[name] = int(value)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    kw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if "n_values" not in kw or "alpha_values" not in kw:
        raise ConfigError("n and alpha are required")
    return ExperimentConfig(**kw)


# --------------------------------------------------------------------------
# trials


@dataclass
class TrialRecord:
    n: int
    alpha: float
    alpha_index: int
    trial: int
    seed: int
    status: str = "ok"
    error: str = ""
    wall_time_s: float = 0.0
    values: dict[str, object] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)

    def row(self, columns: Sequence[str]) -> list[str]:
        base = {
            "schema": SCHEMA_VERSION, "n": self.n, "alpha": repr(self.alpha), "alpha_index": self.alpha_index,
            "trial": self.trial, "seed": self.seed, "status": self.status, "error": self.error,
            "wall_time_s": f"{self.wall_time_s:.4f}",
        }
        return [_fmt(base[c] if c in base else self.values.get(c, "")) for c in columns]

    def to_json(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA_VERSION
        return _jsonable(d)


def _fmt(v: object) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (tuple, list)):
        return " ".join(map(str, v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def metric_columns(cfg: ExperimentConfig) -> list[str]:
    cols: list[str] = []
    for m in cfg.metrics:
        if m == "dimension":
            cols += ["dimension", "dimension_exceeds_cap"]
        elif m == "betti_gf2":
            cols += ["betti_gf2"]
        elif m == "betti_q":
            cols += ["betti_q"]
        elif m == "collapse":
            cols += ["collapse_kind", "free_rank", "collapse_steps"]
            if cfg.check_collapse_betti:
                cols += ["betti_invariant"]
        elif m == "minimal_cycle":
            cols += ["cycle_type", "cycle_class", "cycle_status", "cycle_triangles"]
        elif m == "bubble":
            cols += ["bubble_reason", "bubble_edges", "bubble_certified"]
        elif m == "odd_torsion_screen":
            cols += ["no_odd_torsion_certified", "nu_tilde"]
    for name in cfg.pattern_names:
        cols += [f"count_{name}", f"found_{name}", f"timeout_{name}"]
    return cols


def trial_columns(cfg: ExperimentConfig) -> list[str]:
    return list(TRIAL_COLUMNS) + metric_columns(cfg) + list(TIMING_COLUMNS)


def _betti_through_collapse(x: Complex, cert) -> bool:
    """GF2 Betti numbers equal at every intermediate complex of the trace,
    and Q Betti numbers equal at the end of each phase."""
    ref = _strip(betti(x, GF2).b)
    ref_q = _strip(betti(x, Q).b)
    y = x
    for trace in (cert.phase3, cert.phase2):
        if trace is None:
            continue
        for y in replay(y, trace.steps):
            if _strip(betti(y, GF2).b) != ref:
                return False
        if _strip(betti(y, Q).b) != ref_q:
            return False
    return True


def _strip(b: Sequence[int]) -> tuple[int, ...]:
    b = list(b)
    while b and b[-1] == 0:
        b.pop()
    return tuple(b)


def compute_metrics(cfg: ExperimentConfig, rec: TrialRecord) -> None:
    p = p_from_alpha(rec.n, rec.alpha)
    g = sample_gnp(rec.n, p, rec.seed)
    metrics = set(cfg.metrics)
    v = rec.values
    x: Complex | None = None

    def cx() -> Complex:
        nonlocal x
        if x is None:
            x = clique_complex(g, cfg.dim_cap)
        return x

    if "dimension" in metrics:
        d, more = clique_dimension(g, cfg.dim_cap)
        v["dimension"], v["dimension_exceeds_cap"] = d, more
    for name, fld in (("betti_gf2", GF2), ("betti_q", Q)):
        if name in metrics:
            # top group needs (cap+1)-simplices, so report b_0..b_{cap-1}
            v[name] = tuple(betti(cx(), fld).b[: cfg.dim_cap])
    if "collapse" in metrics:
        cert = freeness_certificate(cx())
        v["collapse_kind"] = cert.kind
        v["free_rank"] = "" if cert.free_rank is None else cert.free_rank
        v["collapse_steps"] = sum(len(t.steps) for t in (cert.phase3, cert.phase2) if t is not None)
        if cfg.check_collapse_betti:
            v["betti_invariant"] = _betti_through_collapse(cx(), cert)
        if cert.closed_report is not None:
            rec.details["closed_part_nu_tilde"] = cert.closed_report.nu_tilde
    two = None
    if metrics & {"minimal_cycle", "bubble", "odd_torsion_screen"}:
        two = cx().skeleton(2)
    if "minimal_cycle" in metrics:
        z = extract_minimal_cycle(two)
        if z is None:
            v.update(cycle_type="", cycle_class="none", cycle_status="", cycle_triangles=0)
        else:
            c = classify_minimal_cycle(z)
            v.update(cycle_type=z.type, cycle_class=c.classification, cycle_status=c.status,
                     cycle_triangles=len(z.triangles))
            rec.details["minimal_cycle"] = {"triangles": z.triangles, "nu_tilde": c.nu_tilde, **c.details}
    if "bubble" in metrics:
        b = find_small_bubble(two, cfg.bubble_cap)
        if b is None:
            v.update(bubble_reason="none", bubble_edges=0, bubble_certified=False)
        else:
            v.update(bubble_reason=b.reason, bubble_edges=b.edge_count, bubble_certified=b.certified)
            rec.details["bubble"] = {"triangles": b.triangles, "reason": b.reason}
    if "odd_torsion_screen" in metrics:
        verdict = odd_torsion_screen(two)
        v["no_odd_torsion_certified"] = verdict.certified
        v["nu_tilde"] = str(verdict.nu_tilde)
    names = cfg.pattern_names
    if names:
        arrays = host_arrays(g)
        for name in names:
            res = count_embeddings(g, get_pattern(name), cap=cfg.embed_cap, p=p,
                                   time_budget=cfg.time_budget, arrays=arrays)
            v[f"count_{name}"] = res.count
            v[f"found_{name}"] = res.found
            v[f"timeout_{name}"] = res.timed_out
            if res.timed_out and not res.found:
                rec.status = "timeout"


def run_trial(cfg: ExperimentConfig, n: int, alpha_index: int, trial: int) -> TrialRecord:
    alpha = cfg.alpha_values[alpha_index]
    rec = TrialRecord(n, alpha, alpha_index, trial, derive_seed(cfg.base_seed, n, alpha_index, trial))
    start = time.perf_counter()
    try:
        compute_metrics(cfg, rec)
    except Exception as exc:  # isolate the failure, keep the run going
        rec.status = "failed"
        rec.error = f"{type(exc).__name__}: {exc}".replace("\n", " ")
        rec.details["traceback"] = traceback.format_exc()
    rec.wall_time_s = time.perf_counter() - start
    return rec


def _cells(cfg: ExperimentConfig) -> list[tuple[int, int, int]]:
    return [
        (n, ai, t)
        for n in cfg.n_values
        for ai in range(len(cfg.alpha_values))
        for t in range(cfg.trials)
    ]


def _run_one(args):
    cfg, n, ai, t = args
    return run_trial(cfg, n, ai, t)


def iter_trials(cfg: ExperimentConfig) -> Iterator[TrialRecord]:
    """Records in (n, alpha, trial) order, whatever the worker count."""
    jobs = [(cfg, n, ai, t) for n, ai, t in _cells(cfg)]
    if cfg.workers == 1:
        for job in jobs:
            yield _run_one(job)
        return
    with ProcessPoolExecutor(cfg.workers) as pool:
        yield from pool.map(_run_one, jobs, chunksize=1)


# --------------------------------------------------------------------------
# summary


@dataclass(frozen=True)
class SummaryRow:
    n: int
    alpha: float
    metric: str
    statistic: str
    value: float
    se: float
    trials_used: int
    excluded: int
    proxy: bool = True

    def row(self) -> list[str]:
        return [str(self.n), repr(self.alpha), self.metric, self.statistic, f"{self.value:.6f}",
                f"{self.se:.6f}", str(self.trials_used), str(self.excluded), "1" if self.proxy else "0"]


def binomial_se(freq: float, m: int) -> float:
    return math.sqrt(freq * (1 - freq) / m) if m else float("nan")


def _freq(n, alpha, metric, stat, hits: Sequence[bool], excluded: int) -> SummaryRow:
    m = len(hits)
    f = sum(hits) / m if m else float("nan")
    return SummaryRow(n, alpha, metric, stat, f, binomial_se(f, m), m, excluded)


def _mean(n, alpha, metric, stat, xs: Sequence[float], excluded: int) -> SummaryRow:
    m = len(xs)
    mu = statistics.fmean(xs) if m else float("nan")
    se = statistics.stdev(xs) / math.sqrt(m) if m > 1 else float("nan")
    return SummaryRow(n, alpha, metric, stat, mu, se, m, excluded, proxy=False)


def summarize(cfg: ExperimentConfig, records: Iterable[TrialRecord]) -> list[SummaryRow]:
    cells: dict[tuple[int, int], list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.n, r.alpha_index), []).append(r)
    rows: list[SummaryRow] = []
    for (n, ai), recs in sorted(cells.items()):
        alpha = cfg.alpha_values[ai]
        ok = [r for r in recs if r.status == "ok"]
        failed = len(recs) - len(ok)
        rows.append(SummaryRow(n, alpha, "trials", "completed", len(ok), 0.0, len(recs), failed, proxy=False))
        for m in cfg.metrics:
            if m == "dimension":
                for d in range(0, cfg.dim_cap + 1):
                    rows.append(_freq(n, alpha, m, f"P(dim={d})", [r.values["dimension"] == d for r in ok], failed))
                rows.append(_freq(n, alpha, m, "P(dim>cap)", [bool(r.values["dimension_exceeds_cap"]) for r in ok], failed))
            elif m in ("betti_gf2", "betti_q"):
                b1 = [r.values[m][1] if len(r.values[m]) > 1 else 0 for r in ok]
                b2 = [r.values[m][2] if len(r.values[m]) > 2 else 0 for r in ok]
                rows.append(_freq(n, alpha, m, "P(b1>0)", [b > 0 for b in b1], failed))
                rows.append(_freq(n, alpha, m, "P(b1=0)", [b == 0 for b in b1], failed))
                rows.append(_freq(n, alpha, m, "P(b2>0)", [b > 0 for b in b2], failed))
                rows.append(_mean(n, alpha, m, "mean b1", b1, failed))
            elif m == "collapse":
                kinds = [r.values["collapse_kind"] for r in ok]
                for k in ("collapsed_to_graph", "residual_closed_part", "obstructed"):
                    rows.append(_freq(n, alpha, m, f"P({k})", [x == k for x in kinds], failed))
                if cfg.check_collapse_betti:
                    rows.append(_freq(n, alpha, m, "P(betti_invariant)", [bool(r.values["betti_invariant"]) for r in ok], failed))
            elif m == "minimal_cycle":
                rows.append(_freq(n, alpha, m, "P(has_cycle)", [r.values["cycle_class"] != "none" for r in ok], failed))
                rows.append(_freq(n, alpha, m, "P(type_B)", [r.values["cycle_type"] == "B" for r in ok], failed))
            elif m == "bubble":
                rows.append(_freq(n, alpha, m, "P(bubble)", [r.values["bubble_reason"] != "none" for r in ok], failed))
            elif m == "odd_torsion_screen":
                rows.append(_freq(n, alpha, m, "P(certified)", [bool(r.values["no_odd_torsion_certified"]) for r in ok], failed))
        for name in cfg.pattern_names:
            # a timeout with a copy already found still decides containment
            usable = [r for r in recs if r.status != "failed" and (r.values.get(f"found_{name}") or not r.values.get(f"timeout_{name}"))]
            excl = len(recs) - len(usable)
            rows.append(_freq(n, alpha, f"patterns:{name}", "P(contains)", [bool(r.values[f"found_{name}"]) for r in usable], excl))
            if cfg.embed_cap == 0:
                full = [r for r in usable if not r.values[f"timeout_{name}"]]
                rows.append(_mean(n, alpha, f"patterns:{name}", "mean count", [r.values[f"count_{name}"] for r in full], len(recs) - len(full)))
    return rows


# --------------------------------------------------------------------------
# output


def records_csv(cfg: ExperimentConfig, records: Sequence[TrialRecord], timing: bool = True) -> str:
    cols = trial_columns(cfg)
    if not timing:
        cols = [c for c in cols if c not in TIMING_COLUMNS]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        w.writerow(r.row(cols))
    return buf.getvalue()


def summary_csv(rows: Sequence[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for r in rows:
        w.writerow(r.row())
    return buf.getvalue()


def strip_timing(csv_text: str) -> str:
    """Drop timing columns so reruns can be compared byte for byte."""
    rows = list(csv.reader(io.StringIO(csv_text)))
    if not rows:
        return csv_text
    keep = [i for i, c in enumerate(rows[0]) if c not in TIMING_COLUMNS]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([r[i] for i in keep])
    return buf.getvalue()


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    summary: list[SummaryRow]

    @property
    def failures(self) -> int:
        return sum(r.status == "failed" for r in self.records)

    @property
    def timeouts(self) -> int:
        return sum(r.status == "timeout" for r in self.records)

    def lookup(self, n: int, alpha: float, metric: str, statistic: str) -> SummaryRow:
        for r in self.summary:
            if (r.n, r.alpha, r.metric, r.statistic) == (n, alpha, metric, statistic):
                return r
        raise KeyError((n, alpha, metric, statistic))

    def write(self, out: Path, fmt: str = "csv", plot: bool = True) -> list[Path]:
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        (out / "config.txt").write_text(self.config.to_text())
        paths.append(out / "config.txt")
        if fmt == "json":
            doc = {
                "schema": SCHEMA_VERSION,
                "config": _jsonable(asdict(self.config)),
                "records": [r.to_json() for r in self.records],
                "summary": [_jsonable(asdict(s)) for s in self.summary],
            }
            (out / "results.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
            paths.append(out / "results.json")
        else:
            (out / "trials.csv").write_text(records_csv(self.config, self.records))
            (out / "summary.csv").write_text(summary_csv(self.summary))
            paths += [out / "trials.csv", out / "summary.csv"]
        if plot:
            from .plotting import plot_summary

            svg = out / "summary.svg"
            if plot_summary(self.summary, svg):
                paths.append(svg)
        return paths


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    records = list(iter_trials(cfg))
    return ExperimentResult(cfg, records, summarize(cfg, records))


# --------------------------------------------------------------------------
# threshold sweeps


@dataclass(frozen=True)
class SweepPoint:
    alpha: float
    trials_used: int
    timeouts: int
    frequency: float
    se: float


@dataclass(frozen=True)
class SweepResult:
    pattern: str
    n: int
    nu_tilde: Fraction
    points: tuple[SweepPoint, ...]

    @property
    def marker(self) -> float:
        """Predicted threshold exponent -nu_tilde."""
        return -float(self.nu_tilde)

    @property
    def crossing(self) -> float | None:
        return crossing_point([p.alpha for p in self.points], [p.frequency for p in self.points])

    @property
    def monotone(self) -> bool:
        """Non-decreasing in alpha up to two standard errors."""
        pts = self.points
        return all(
            b.frequency >= a.frequency - 2 * math.hypot(a.se, b.se)
            for a, b in zip(pts, pts[1:])
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pattern", "n", "alpha", "frequency", "se", "trials_used", "timeouts", "marker", "proxy"])
        for p in self.points:
            w.writerow([self.pattern, self.n, repr(p.alpha), f"{p.frequency:.6f}", f"{p.se:.6f}",
                        p.trials_used, p.timeouts, repr(self.marker), 1])
        return buf.getvalue()

    def write(self, out: Path, stem: str | None = None, plot: bool = True) -> list[Path]:
        out.mkdir(parents=True, exist_ok=True)
        stem = stem or f"sweep_{self.pattern}_n{self.n}"
        paths = [out / f"{stem}.csv"]
        paths[0].write_text(self.to_csv())
        if plot:
            from .plotting import plot_sweep

            paths.append(plot_sweep(self, out / f"{stem}.svg"))
        return paths


def crossing_point(alphas: Sequence[float], freqs: Sequence[float], level: float = 0.5) -> float | None:
    """First alpha where the curve reaches ``level``, linearly interpolated."""
    pts = sorted(zip(alphas, freqs))
    for (a0, f0), (a1, f1) in zip(pts, pts[1:]):
        if f0 < level <= f1:
            return a0 + (level - f0) * (a1 - a0) / (f1 - f0)
    return None


def threshold_sweep(
    pattern: str, n: int, alpha_grid: Sequence[float], trials: int, seed: int = 0,
    time_budget: float | None = None, workers: int = 1,
) -> SweepResult:
    """Containment frequency of ``pattern`` in G(n, n**alpha) over the grid."""
    cfg = ExperimentConfig(
        (n,), tuple(alpha_grid), trials, seed, (f"patterns:{pattern}",),
        embed_cap=1, time_budget=time_budget, workers=workers,
    )
    res = run_experiment(cfg)
    points = []
    for ai, alpha in enumerate(cfg.alpha_values):
        row = res.lookup(n, alpha, f"patterns:{pattern}", "P(contains)")
        points.append(SweepPoint(alpha, row.trials_used, row.excluded, row.value, row.se))
    return SweepResult(pattern, n, get_pattern(pattern).nu_tilde, tuple(points))
