"""Monte Carlo experiment drivers and CSV output.

Trial ``t`` always draws its channels from ``SeededRng(seed, t)``, whatever
the grid point, scheme or worker that evaluates it. Results are re-sorted by
(grid point, scheme, trial) before aggregation, so outputs are byte-identical
for any worker count.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .channel import SeededRng, SystemConfig, sample_realization, snr_db_to_power
from .errors import ConfigError
from .grassmann import SubspaceCodebook, SubspaceBasis, covering_distances, random_subspaces
from .outage import outage_curve, outage_probability, rate_for_outage, sample_eve_rate_distribution
from .rates import dof_slope, rate_report, sufficient_jammer_count, top_window
from .selection import DEFAULT_EXHAUSTIVE_CAP, SchemeTag, check_feasible, select

MODES = ("fixed_sweep", "scaling_sweep", "outage", "covering")
RECORD_FIELDS = ("snr_db", "power", "pool_size", "scheme", "trial",
                 "r_bob", "c_eve", "secrecy", "r_bob_loss")
SUMMARY_FIELDS = ("snr_db", "power", "pool_size", "scheme",
                  "mean_r_bob", "mean_c_eve", "mean_secrecy", "stderr_secrecy")

CODEBOOK_STREAM = 4
COVER_SAMPLE_STREAM = 5


@dataclass(frozen=True)
class ExperimentSpec:
    mode: str
    config: SystemConfig
    snr_grid_db: tuple = ()
    trials: int = 100
    schemes: tuple = (SchemeTag.OJS1,)
    scaling_c: float | None = None
    scaling_a: float | None = None
    seed: int = 0
    output_path: str | None = None
    kappa2: float = 1.0
    delta: float = 1.0
    epsilon: float = 0.1
    outage_trials: int = 10_000
    r_points: int = 41
    covering_ms: tuple = (2, 8, 32, 128)
    covering_samples: int = 2000
    covering_reps: int = 3
    dof_window: int = 4
    greedy: bool = False
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "snr_grid_db", tuple(float(x) for x in self.snr_grid_db))
        object.__setattr__(self, "schemes", tuple(SchemeTag(s) for s in self.schemes))
        object.__setattr__(self, "covering_ms", tuple(int(m) for m in self.covering_ms))
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        grid = self.snr_grid_db
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("snr grid must be strictly increasing")
        if self.mode != "covering" and not grid:
            raise ConfigError(f"mode {self.mode} needs a non-empty snr grid")
        scaled = self.scaling_c is not None or self.scaling_a is not None
        if self.mode == "scaling_sweep":
            if self.scaling_c is None or self.scaling_a is None:
                raise ConfigError("scaling_sweep needs scaling_c and scaling_a")
            if self.scaling_c <= 0 or self.scaling_a < 0:
                raise ConfigError("need scaling_c > 0 and scaling_a >= 0")
        elif scaled:
            raise ConfigError("scaling_c/scaling_a only apply to scaling_sweep")

    def pool_size(self, power: float) -> int:
        """S(P) = max(K, round(c * P^a)) in scaling mode, the configured pool otherwise."""
        if self.mode != "scaling_sweep":
            return self.config.s
        return max(self.config.k, int(round(self.scaling_c * power ** self.scaling_a)))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schemes"] = [s.value for s in self.schemes]
        return d


@dataclass(frozen=True)
class TrialRecord:
    snr_db: float
    power: float
    pool_size: int
    scheme: SchemeTag
    trial: int
    r_bob: float
    c_eve: float
    secrecy: float
    r_bob_loss: float
    c_bob: float = field(default=math.nan, compare=False)


@dataclass(frozen=True)
class SummaryRow:
    snr_db: float
    power: float
    pool_size: int
    scheme: SchemeTag
    mean_r_bob: float
    mean_c_eve: float
    mean_secrecy: float
    stderr_secrecy: float
    stderr_r_bob: float = math.nan
    stderr_c_eve: float = math.nan
    trials: int = 0


@dataclass
class SweepResult:
    spec: ExperimentSpec
    records: list
    summary: list
    slopes: dict  # scheme -> metric -> DofEstimate
    extra: dict = field(default_factory=dict)


# --- trial workers ----------------------------------------------------------

def _evaluate(spec: ExperimentSpec, real, cfg, snr_db: float, t: int):
    power = snr_db_to_power(snr_db)
    out = []
    for scheme in spec.schemes:
        sel = select(scheme, real, cfg, power, rng=SeededRng(spec.seed, t),
                     greedy=spec.greedy, cap=spec.exhaustive_cap)
        rep = rate_report(real, sel, cfg, power)
        out.append(TrialRecord(snr_db, power, cfg.s, scheme, t, rep.r_bob, rep.c_eve,
                               rep.secrecy, rep.r_bob_loss, rep.c_bob))
    return out


def _fixed_trial(spec: ExperimentSpec, t: int):
    real = sample_realization(spec.config, SeededRng(spec.seed, t))
    out = []
    for snr in spec.snr_grid_db:
        out.extend(_evaluate(spec, real, spec.config, snr, t))
    return out


def _scaling_task(spec: ExperimentSpec, task):
    snr, t = task
    cfg = spec.config.with_pool(spec.pool_size(snr_db_to_power(snr)))
    real = sample_realization(cfg, SeededRng(spec.seed, t))
    return _evaluate(spec, real, cfg, snr, t)


def _run_tasks(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(x) for x in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def _sort_records(spec: ExperimentSpec, records):
    snr_pos = {s: i for i, s in enumerate(spec.snr_grid_db)}
    sch_pos = {s: i for i, s in enumerate(spec.schemes)}
    return sorted(records, key=lambda r: (snr_pos[r.snr_db], sch_pos[r.scheme], r.trial))


def _stderr(x: np.ndarray) -> float:
    return float(np.std(x, ddof=1) / np.sqrt(x.size)) if x.size > 1 else math.nan


def summarize(spec: ExperimentSpec, records) -> list[SummaryRow]:
    groups: dict = {}
    for r in records:
        groups.setdefault((r.snr_db, r.scheme), []).append(r)
    rows = []
    for snr in spec.snr_grid_db:
        for scheme in spec.schemes:
            rs = groups.get((snr, scheme), [])
            if not rs:
                continue
            rb = np.array([r.r_bob for r in rs])
            ce = np.array([r.c_eve for r in rs])
            sec = np.array([r.secrecy for r in rs])
            rows.append(SummaryRow(snr, rs[0].power, rs[0].pool_size, scheme,
                                   float(rb.mean()), float(ce.mean()), float(sec.mean()),
                                   _stderr(sec), _stderr(rb), _stderr(ce), len(rs)))
    return rows


def fit_slopes(spec: ExperimentSpec, summary, metrics=("r_bob", "c_eve", "secrecy")) -> dict:
    slopes = {}
    if len(spec.snr_grid_db) < 2:
        return slopes
    for scheme in spec.schemes:
        rows = [r for r in summary if r.scheme == scheme]
        slopes[scheme] = {
            m: dof_slope(top_window([(r.power, getattr(r, f"mean_{m}")) for r in rows],
                                    spec.dof_window))
            for m in metrics
        }
    return slopes


# --- experiment modes --------------------------------------------------------

def run_fixed_sweep(spec: ExperimentSpec, workers: int = 1) -> SweepResult:
    """Fixed pool, SNR sweep: same realization per trial across the grid and schemes."""
    if spec.mode not in ("fixed_sweep", "outage"):
        raise ConfigError(f"run_fixed_sweep needs mode fixed_sweep, got {spec.mode}")
    chunks = _run_tasks(partial(_fixed_trial, spec), list(range(spec.trials)), workers)
    records = _sort_records(spec, [r for c in chunks for r in c])
    summary = summarize(spec, records)
    return SweepResult(spec, records, summary, fit_slopes(spec, summary))


def run_scaling_sweep(spec: ExperimentSpec, workers: int = 1) -> SweepResult:
    """Pool size follows S(P) = max(K, round(c P^a)) along the SNR grid."""
    if spec.mode != "scaling_sweep":
        raise ConfigError(f"run_scaling_sweep needs mode scaling_sweep, got {spec.mode}")
    pools = [spec.pool_size(snr_db_to_power(s)) for s in spec.snr_grid_db]
    if not spec.greedy:
        check_feasible(max(pools), spec.config.k, spec.exhaustive_cap)
    tasks = [(snr, t) for snr in spec.snr_grid_db for t in range(spec.trials)]
    chunks = _run_tasks(partial(_scaling_task, spec), tasks, workers)
    records = _sort_records(spec, [r for c in chunks for r in c])
    summary = summarize(spec, records)
    sufficient = [
        {"snr_db": s, "pool_size": p,
         "sufficient_pool": sufficient_jammer_count(spec.delta, snr_db_to_power(s),
                                                    spec.config, spec.kappa2)}
        for s, p in zip(spec.snr_grid_db, pools)
    ]
    return SweepResult(spec, records, summary, fit_slopes(spec, summary),
                       extra={"sufficient_jammers": sufficient})


def run_outage(spec: ExperimentSpec, workers: int = 1) -> SweepResult:
    """Outage curve of Eve's saturated rate, then Bob's sweep against a constant Eve rate.

    Summary rows carry the constant rate ``r`` in ``mean_c_eve`` and the mean
    of ``[r_bob - r]^+`` in ``mean_secrecy``.
    """
    if spec.mode != "outage":
        raise ConfigError(f"run_outage needs mode outage, got {spec.mode}")
    samples = sample_eve_rate_distribution(spec.config, spec.outage_trials,
                                           SeededRng(spec.seed, 0))
    top = float(samples.values.max())
    curve = outage_curve(samples, np.linspace(0.0, top, spec.r_points))
    r = rate_for_outage(samples, spec.epsilon)

    bob = run_fixed_sweep(spec, workers)
    records = [replace(x, c_eve=r, secrecy=max(x.r_bob - r, 0.0)) for x in bob.records]
    summary = summarize(spec, records)
    slopes = fit_slopes(spec, summary, metrics=("r_bob", "secrecy"))
    extra = {
        "curve": curve,
        "rate": r,
        "achieved_outage": outage_probability(samples, r),
        "samples": samples,
    }
    return SweepResult(spec, records, summary, slopes, extra)


@dataclass
class CoveringResult:
    spec: ExperimentSpec
    rows: list  # (m, mean estimate, per-rep estimates)
    slope: float


def run_covering(spec: ExperimentSpec, workers: int = 1) -> CoveringResult:
    """Covering-radius estimates for random codebooks of increasing size.

    Within a repetition every codebook is a prefix of the largest one and all
    sizes share one sample set, so estimates never increase with M inside a
    repetition.
    """
    if spec.mode != "covering":
        raise ConfigError(f"run_covering needs mode covering, got {spec.mode}")
    ms = sorted(spec.covering_ms)
    per_rep = _run_tasks(partial(_covering_rep, spec, ms), list(range(spec.covering_reps)), workers)
    est = np.array(per_rep)  # (reps, len(ms))
    means = est.mean(axis=0)
    rows = [(m, float(means[i]), tuple(float(x) for x in est[:, i])) for i, m in enumerate(ms)]
    slope = math.nan
    if len(ms) >= 2 and np.all(means > 0):
        slope = float(np.polyfit(np.log(ms), np.log(means), 1)[0])
    return CoveringResult(spec, rows, slope)


def _covering_rep(spec: ExperimentSpec, ms, rep: int):
    c = spec.config
    rng = SeededRng(spec.seed, rep)
    book = random_subspaces(c.nr, c.nr - c.nt, max(ms), rng.generator(CODEBOOK_STREAM))
    samples = random_subspaces(c.nr, c.nj, spec.covering_samples, rng.generator(COVER_SAMPLE_STREAM))
    out = []
    for m in ms:
        cb = SubspaceCodebook(tuple(SubspaceBasis(q) for q in book[:m]))
        out.append(float(covering_distances(cb, samples).max()))
    return out


def run(spec: ExperimentSpec, workers: int = 1):
    return {
        "fixed_sweep": run_fixed_sweep,
        "scaling_sweep": run_scaling_sweep,
        "outage": run_outage,
        "covering": run_covering,
    }[spec.mode](spec, workers)


# --- output -----------------------------------------------------------------

def _cell(x) -> str:
    if isinstance(x, SchemeTag):
        return x.value
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(rows, path, header=None):
    """Write trial records, summary rows or plain tuples with a fixed header.

    Floats are written with ``repr`` (shortest round-trip form).
    """
    rows = list(rows)
    if header is None:
        if rows and isinstance(rows[0], SummaryRow):
            header = SUMMARY_FIELDS
        else:
            header = RECORD_FIELDS
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            if isinstance(row, (TrialRecord, SummaryRow)):
                values = [getattr(row, h) for h in header]
            else:
                values = list(row)
            w.writerow([_cell(v) for v in values])


def output_paths(out) -> dict:
    out = Path(out)
    return {
        "main": out,
        "summary": out.with_name(out.stem + "_summary.csv"),
        "meta": out.with_name(out.stem + ".meta.json"),
    }


def _slopes_json(slopes) -> dict:
    return {s.value: {m: est.slope for m, est in d.items()} for s, d in slopes.items()}


def write_outputs(result, out) -> dict:
    """CSV files plus a JSON sidecar echoing the resolved spec."""
    paths = output_paths(out)
    spec = result.spec
    meta = {"version": __version__, "spec": spec.to_dict()}
    if isinstance(result, CoveringResult):
        write_csv([(m, mean) for m, mean, _ in result.rows], paths["main"],
                  header=("m", "covering_radius"))
        meta["loglog_slope"] = result.slope
        meta["per_rep"] = {str(m): list(reps) for m, _, reps in result.rows}
        del paths["summary"]
    elif spec.mode == "outage":
        write_csv(result.extra["curve"], paths["main"], header=("r", "epsilon"))
        write_csv(result.summary, paths["summary"])
        meta["rate"] = result.extra["rate"]
        meta["achieved_outage"] = result.extra["achieved_outage"]
        meta["dof_slopes"] = _slopes_json(result.slopes)
    else:
        write_csv(result.records, paths["main"])
        write_csv(result.summary, paths["summary"])
        meta["dof_slopes"] = _slopes_json(result.slopes)
        meta.update(result.extra)
    paths["meta"].write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")
    return paths


# --- config files -----------------------------------------------------------

_INT_KEYS = {"nt", "nj", "nr", "ne", "k", "s", "trials", "seed", "covering_samples",
             "covering_reps", "outage_trials", "r_points", "dof_window", "exhaustive_cap"}
_FLOAT_KEYS = {"scaling_c", "scaling_a", "kappa2", "delta", "epsilon"}
_LIST_KEYS = {"snr_db", "schemes", "covering_ms"}
_BOOL_KEYS = {"allow_nonstandard", "greedy"}
KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _LIST_KEYS | _BOOL_KEYS


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, lists are comma separated."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
        elif ":" in line:
            key, value = line.split(":", 1)
        else:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = key.strip().lower(), value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in _INT_KEYS:
                out[key] = int(float(value)) if key == "exhaustive_cap" else int(value)
            elif key in _FLOAT_KEYS:
                out[key] = float(value)
            elif key in _BOOL_KEYS:
                out[key] = value.lower() in ("1", "true", "yes", "on")
            elif key == "snr_db":
                out[key] = [float(x) for x in value.split(",") if x.strip()]
            elif key == "covering_ms":
                out[key] = [int(x) for x in value.split(",") if x.strip()]
            else:
                out[key] = [x.strip().upper() for x in value.split(",") if x.strip()]
        except ValueError as e:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from e
    return out


def load_config(path) -> dict:
    return parse_config_text(Path(path).read_text())


def spec_from_mapping(mode: str, kv: dict, **overrides) -> ExperimentSpec:
    """Build a spec from parsed config keys; non-None ``overrides`` win."""
    kv = {**kv, **{k: v for k, v in overrides.items() if v is not None}}
    try:
        k = kv["k"]
        cfg = SystemConfig(kv["nt"], kv["nj"], kv["nr"], kv["ne"], k, kv.get("s", k),
                           kv.get("allow_nonstandard", False))
    except KeyError as e:
        raise ConfigError(f"missing required key {e.args[0]!r}") from None
    args = {
        "snr_grid_db": kv.get("snr_db", ()),
        "schemes": kv.get("schemes", ("OJS1",)),
        "scaling_c": kv.get("scaling_c"),
        "scaling_a": kv.get("scaling_a"),
    }
    if mode != "scaling_sweep":
        args["scaling_c"] = args["scaling_a"] = None
    for key in ("trials", "seed", "kappa2", "delta", "epsilon", "outage_trials", "r_points",
                "covering_ms", "covering_samples", "covering_reps", "dof_window", "greedy",
                "exhaustive_cap", "output_path"):
        if key in kv:
            args[key] = kv[key]
    return ExperimentSpec(mode=mode, config=cfg, **args)
