"""Parameter sweep: SC -> A -> correlation -> FC graph -> null -> indices, over a grid.

Seeds are derived per work unit from the master seed and the parameter
values (see :mod:`fcsmallworld.rng`), so a record depends only on its own
coordinates: the sweep is independent of evaluation order, of ``jobs``,
and of which other cells are in the grid. Streams:

* ``sc``    -- structural graph; keyed by (n, p_sc, realization), so the
  same SC realization is reused across s, alpha and p_fc.
* ``noise`` -- AR(1) innovations (finite mode); keyed by (n, s, alpha, p_sc, realization).
* ``tie``   -- tie order at the binarization cut; adds p_fc.
* ``null``  -- null-graph generation; adds p_fc.
"""

from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import MISSING, asdict, dataclass, fields, replace
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .errors import ConfigError, DegenerateNormalization, InvalidArgument, MissingCells, NumericalError
from .fc import CorrelationMatrix, binarize_to_density, pearson_matrix
from .graph import BinaryGraph, GraphMetrics, metrics
from .model import (
    CouplingMatrix,
    StructuralGraph,
    asymptotic_covariance,
    build_coupling,
    cov_to_corr,
    default_burn_in,
    generate_er,
    generate_weighted_er,
    simulate_ar1,
)
from .nullmodels import er_gnp, er_matched, maslov_sneppen, small_world
from .rng import STREAM_NOISE, STREAM_NULL, STREAM_SC, STREAM_TIE, derive_seed
from .stats import sign_test, t_test_one_sample

MODES = ("asymptotic", "finite")
SC_WEIGHTS = ("binary", "uniform01", "halfnormal")
ER_VARIANTS = ("gnm", "gnp")
PATH_LENGTH_MODES = ("finite_pairs", "largest_component")
METRICS = ("gamma", "lambda", "sigma")
AGGREGATES = ("mean", "median")
NA = "NA"
# cells x realizations above which the CLI warns about runtime
LARGE_SWEEP_UNITS = 20_000


def default_density_grid() -> list[float]:
    """2**x for x = 0, -0.3, ..., -6.9 (24 values, strictly decreasing)."""
    return [2.0 ** (-3 * k / 10) for k in range(24)]


def density_subgrid(step: int = 3, offset: int = 0) -> list[float]:
    return default_density_grid()[offset::step]


@dataclass
class SweepConfig:
    n_values: list[int]
    s_values: list[float]
    alpha_values: list[float]
    p_sc_values: list[float]
    p_fc_values: list[float]
    master_seed: int
    realizations: int = 20
    mode: str = "asymptotic"
    t_len: int = 300
    burn_in: int | None = None
    null_model: str = "er"
    er_variant: str = "gnm"
    n_nulls: int = 1
    swap_factor: float = 10.0
    sc_weights: str = "binary"
    connected_only: bool = False
    absolute: bool = False
    path_length: str = "finite_pairs"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def check_list(key, pred, what):
            vals = getattr(self, key)
            if not isinstance(vals, (list, tuple)) or not vals:
                raise ConfigError(key, "must be a non-empty list")
            for v in vals:
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not pred(v):
                    raise ConfigError(key, f"value {v!r} is not {what}")
            if len(set(vals)) != len(vals):
                raise ConfigError(key, "contains duplicate values")

        check_list("n_values", lambda v: float(v).is_integer() and v >= 2, "an integer >= 2")
        check_list("s_values", lambda v: 0 < v < 1, "in (0, 1)")
        check_list("alpha_values", lambda v: v >= 0, ">= 0")
        check_list("p_sc_values", lambda v: 0 < v <= 1, "a density in (0, 1]")
        check_list("p_fc_values", lambda v: 0 < v <= 1, "a density in (0, 1]")
        self.n_values = [int(v) for v in self.n_values]
        self.s_values = [float(v) for v in self.s_values]
        self.alpha_values = [float(v) for v in self.alpha_values]
        self.p_sc_values = [float(v) for v in self.p_sc_values]
        self.p_fc_values = [float(v) for v in self.p_fc_values]
        if not isinstance(self.realizations, int) or isinstance(self.realizations, bool) or self.realizations < 1:
            raise ConfigError("realizations", f"must be a positive integer, got {self.realizations!r}")
        if not isinstance(self.master_seed, int) or isinstance(self.master_seed, bool):
            raise ConfigError("master_seed", f"must be an integer, got {self.master_seed!r}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed", "must fit in an unsigned 64-bit integer")
        for key, allowed in (("mode", MODES), ("null_model", ("er", "maslov_sneppen")),
                             ("er_variant", ER_VARIANTS), ("sc_weights", SC_WEIGHTS),
                             ("path_length", PATH_LENGTH_MODES)):
            if getattr(self, key) not in allowed:
                raise ConfigError(key, f"{getattr(self, key)!r} is not one of {', '.join(allowed)}")
        if not isinstance(self.t_len, int) or self.t_len < 3:
            raise ConfigError("t_len", "must be an integer >= 3")
        if self.burn_in is not None and (not isinstance(self.burn_in, int) or self.burn_in < 0):
            raise ConfigError("burn_in", "must be a non-negative integer or null")
        if not isinstance(self.n_nulls, int) or self.n_nulls < 1:
            raise ConfigError("n_nulls", "must be a positive integer")
        if not self.swap_factor > 0:
            raise ConfigError("swap_factor", "must be positive")
        for key in ("connected_only", "absolute"):
            if not isinstance(getattr(self, key), bool):
                raise ConfigError(key, "must be true or false")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
        for f in fields(cls):
            if f.default is MISSING and f.name not in data:
                raise ConfigError(f.name, "required key is missing")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def n_units(self) -> int:
        return (len(self.n_values) * len(self.s_values) * len(self.alpha_values)
                * len(self.p_sc_values) * len(self.p_fc_values) * self.realizations)


def load_config(path) -> SweepConfig:
    """Read a JSON sweep configuration; keys mirror :class:`SweepConfig` fields."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        from .errors import ParseError
        raise ParseError(exc.msg, path=path, line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    return SweepConfig.from_dict(data)


@dataclass(frozen=True, order=True)
class CellParams:
    n: int
    s: float
    alpha: float
    p_sc: float
    p_fc: float


@dataclass(frozen=True)
class Record:
    """One realization of one cell. None marks an undefined value."""

    n: int
    s: float
    alpha: float
    p_sc: float
    p_fc: float
    realization: int
    status: str
    achieved_density: float | None = None
    n_edges: int | None = None
    clustering: float | None = None
    avg_path_length: float | None = None
    null_clustering: float | None = None
    null_avg_path_length: float | None = None
    gamma: float | None = None
    lambda_: float | None = None
    sigma: float | None = None
    n_components: int | None = None
    connected: bool | None = None
    null_partial: bool | None = None
    sc_seed: int | None = None
    noise_seed: int | None = None
    tie_seed: int | None = None
    null_seed: int | None = None

    @property
    def params(self) -> CellParams:
        return CellParams(self.n, self.s, self.alpha, self.p_sc, self.p_fc)


@dataclass(frozen=True)
class CellResult:
    params: CellParams
    records: tuple[Record, ...]
    aggregates: dict


def unit_seeds(n, s, alpha, p_sc, realization, master_seed) -> tuple[int, int]:
    sc_seed = derive_seed(master_seed, STREAM_SC, int(n), float(p_sc), int(realization))
    noise_seed = derive_seed(master_seed, STREAM_NOISE, int(n), float(s), float(alpha),
                             float(p_sc), int(realization))
    return sc_seed, noise_seed


def cell_seeds(params: CellParams, realization: int, master_seed: int) -> tuple[int, int]:
    key = (int(params.n), float(params.s), float(params.alpha), float(params.p_sc),
           float(params.p_fc), int(realization))
    return (derive_seed(master_seed, STREAM_TIE, *key),
            derive_seed(master_seed, STREAM_NULL, *key))


@dataclass(frozen=True, eq=False)
class Realization:
    """Intermediate objects of one (n, s, alpha, p_sc, realization) unit."""

    sc: StructuralGraph
    coupling: CouplingMatrix
    correlation: CorrelationMatrix
    p_sc: float
    sc_seed: int
    noise_seed: int | None


def realize_correlation(n: int, s: float, alpha: float, p_sc: float, realization: int,
                        master_seed: int, config: SweepConfig) -> Realization:
    """SC, coupling and correlation matrix for one unit.

    Raises DegenerateNormalization / NumericalError, which the sweep turns
    into undefined records.
    """
    sc_seed, noise_seed = unit_seeds(n, s, alpha, p_sc, realization, master_seed)
    if config.sc_weights == "binary":
        sc = generate_er(n, p_sc, sc_seed)
    else:
        sc = generate_weighted_er(n, p_sc, config.sc_weights, sc_seed)
    a = build_coupling(sc, s, alpha)
    if config.mode == "asymptotic":
        corr = cov_to_corr(asymptotic_covariance(a))
        noise_seed = None
    else:
        burn = config.burn_in if config.burn_in is not None else default_burn_in(s)
        ts = simulate_ar1(a, config.t_len, burn, noise_seed)
        corr = pearson_matrix(ts)
    return Realization(sc, a, corr, float(p_sc), sc_seed, noise_seed)


@dataclass(frozen=True, eq=False)
class FCOutcome:
    record: Record
    fc_graph: BinaryGraph | None
    nulls: tuple[BinaryGraph, ...]
    fc_metrics: GraphMetrics | None


def _make_nulls(g: BinaryGraph, null_seed: int, config: SweepConfig) -> tuple[list[BinaryGraph], bool]:
    nulls, partial = [], False
    for j in range(config.n_nulls):
        seed = null_seed if j == 0 else derive_seed(null_seed, j)
        if config.null_model == "er":
            nulls.append(er_matched(g, seed) if config.er_variant == "gnm" else er_gnp(g, seed))
        elif g.n_edges < 2:
            nulls.append(g)
            partial = True
        else:
            rw = maslov_sneppen(g, config.swap_factor, seed)
            nulls.append(rw.graph)
            partial = partial or rw.partial
    return nulls, partial


def evaluate_fc(real: Realization, p_fc: float, realization: int, master_seed: int,
                config: SweepConfig) -> FCOutcome:
    """Binarize a unit's correlation matrix at ``p_fc`` and score it against its null."""
    sc = real.sc
    params = CellParams(sc.n, real.coupling.s, real.coupling.alpha, real.p_sc, float(p_fc))
    tie_seed, null_seed = cell_seeds(params, realization, master_seed)
    lc = config.path_length == "largest_component"
    b = binarize_to_density(real.correlation, p_fc, tie_seed, absolute=config.absolute)
    g = b.graph
    gm = metrics(g, largest_component=lc)
    nulls, partial = _make_nulls(g, null_seed, config)
    nms = [metrics(h, largest_component=lc) for h in nulls]
    idx = small_world(g, nulls, config.null_model, null_seed, g_metrics=gm, null_metrics=nms)
    l_null = [m.avg_path_length for m in nms]
    rec = Record(
        **asdict(params), realization=int(realization),
        status="empty-fc" if b.empty else "ok",
        achieved_density=b.achieved_density, n_edges=b.n_edges,
        clustering=gm.clustering, avg_path_length=gm.avg_path_length,
        null_clustering=math.fsum(m.clustering for m in nms) / len(nms),
        null_avg_path_length=None if any(v is None for v in l_null) else math.fsum(l_null) / len(l_null),
        gamma=idx.gamma, lambda_=idx.lambda_, sigma=idx.sigma,
        n_components=gm.n_components, connected=gm.n_components == 1,
        null_partial=partial,
        sc_seed=real.sc_seed, noise_seed=real.noise_seed, tie_seed=tie_seed, null_seed=null_seed,
    )
    return FCOutcome(rec, g, tuple(nulls), gm)


def _failed_record(params: CellParams, realization: int, status: str, master_seed: int) -> Record:
    sc_seed, noise_seed = unit_seeds(params.n, params.s, params.alpha, params.p_sc, realization, master_seed)
    tie_seed, null_seed = cell_seeds(params, realization, master_seed)
    return Record(**asdict(params), realization=int(realization), status=status,
                  sc_seed=sc_seed, noise_seed=noise_seed, tie_seed=tie_seed, null_seed=null_seed)


def _run_unit(args) -> list[Record]:
    n, s, alpha, p_sc, realization, master_seed, config = args
    try:
        real = realize_correlation(n, s, alpha, p_sc, realization, master_seed, config)
    except (DegenerateNormalization, NumericalError) as exc:
        return [_failed_record(CellParams(n, s, alpha, p_sc, p_fc), realization, exc.category, master_seed)
                for p_fc in config.p_fc_values]
    return [evaluate_fc(real, p_fc, realization, master_seed, config).record
            for p_fc in config.p_fc_values]


def run_cell(params: CellParams, realization: int, master_seed: int,
             config: SweepConfig | None = None) -> Record:
    """Evaluate a single (cell, realization); the same record run_sweep produces."""
    if config is None:
        config = SweepConfig([params.n], [params.s], [params.alpha], [params.p_sc], [params.p_fc],
                             master_seed=master_seed, realizations=realization + 1)
    config = replace(config, p_fc_values=[float(params.p_fc)])
    return _run_unit((int(params.n), float(params.s), float(params.alpha), float(params.p_sc),
                      int(realization), master_seed, config))[0]


def _stats(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "median": None, "std": None, "n": 0}
    return {
        "mean": math.fsum(values) / len(values),
        "median": float(statistics.median(values)),
        "std": statistics.stdev(values) if len(values) > 1 else None,
        "n": len(values),
    }


def aggregate(records: Sequence[Record], connected_only: bool = False) -> dict:
    """Per-cell summary over defined values; records must be sorted by realization."""
    used = [r for r in records if r.connected] if connected_only else list(records)
    out = {"n_used": len(used)}
    for name, attr in (("gamma", "gamma"), ("lambda", "lambda_"), ("sigma", "sigma")):
        vals = [getattr(r, attr) for r in used if getattr(r, attr) is not None]
        for k, v in _stats(vals).items():
            out[f"{name}_{k}"] = v
    sig = [r.sigma for r in used if r.sigma is not None]
    out["count_defined"] = len(sig)
    out["count_sigma_gt_1"] = sum(1 for v in sig if v > 1.0)
    out["sign_test_p"] = sign_test(sig, 1.0)
    out["t_test_p"] = t_test_one_sample(sig, 1.0)
    return out


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[CellResult]:
    """Evaluate every cell of the grid; results in (n, s, alpha, p_sc, p_fc) grid order."""
    units = [(n, s, a, p, r, config.master_seed, config)
             for n, s, a, p in product(config.n_values, config.s_values, config.alpha_values, config.p_sc_values)
             for r in range(config.realizations)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_run_unit, units, chunksize=max(1, len(units) // (8 * jobs))))
    else:
        outputs = [_run_unit(u) for u in units]
    by_cell: dict[CellParams, list[Record]] = {}
    for recs in outputs:
        for rec in recs:
            by_cell.setdefault(rec.params, []).append(rec)
    results = []
    for n, s, a, p_sc, p_fc in product(config.n_values, config.s_values, config.alpha_values,
                                       config.p_sc_values, config.p_fc_values):
        params = CellParams(n, s, a, p_sc, p_fc)
        recs = tuple(sorted(by_cell[params], key=lambda r: r.realization))
        results.append(CellResult(params, recs, aggregate(recs, config.connected_only)))
    return results


# ---------------------------------------------------------------- table I/O

RECORD_COLUMNS = [
    "kind", "n", "s", "alpha", "p_sc", "p_fc", "realization", "status",
    "achieved_density", "n_edges", "clustering", "avg_path_length",
    "null_clustering", "null_avg_path_length", "gamma", "lambda", "sigma",
    "n_components", "connected", "null_partial",
    "sc_seed", "noise_seed", "tie_seed", "null_seed",
]
AGGREGATE_COLUMNS = [
    "n_used", "count_defined", "count_sigma_gt_1",
    "gamma_mean", "gamma_median", "gamma_std", "gamma_n",
    "lambda_mean", "lambda_median", "lambda_std", "lambda_n",
    "sigma_mean", "sigma_median", "sigma_std", "sigma_n",
    "sign_test_p", "t_test_p",
]
COLUMNS = RECORD_COLUMNS + AGGREGATE_COLUMNS
_INT_COLS = {"n", "realization", "n_edges", "n_components", "sc_seed", "noise_seed", "tie_seed",
             "null_seed", "n_used", "count_defined", "count_sigma_gt_1", "gamma_n", "lambda_n", "sigma_n"}
_BOOL_COLS = {"connected", "null_partial"}
_STR_COLS = {"kind", "status"}


def _fmt(v) -> str:
    if v is None:
        return NA
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse(col: str, text: str):
    if text == NA:
        return None
    if col in _STR_COLS:
        return text
    if col in _BOOL_COLS:
        if text not in ("true", "false"):
            raise ValueError(f"bad boolean {text!r}")
        return text == "true"
    if col in _INT_COLS:
        return int(text)
    return float(text)


def header_line(command: str, params: dict) -> str:
    return f"# fcsmallworld {__version__} {command} " + json.dumps(params, sort_keys=True, separators=(",", ":"))


def write_results(results: Sequence[CellResult], path, header: str | None = None) -> None:
    """Tab-separated table: one ``record`` row per realization, then one ``aggregate`` row per cell."""
    lines = []
    if header is not None:
        lines.append(header)
    lines.append("\t".join(COLUMNS))
    for cell in results:
        for rec in cell.records:
            row = {c: None for c in COLUMNS}
            d = asdict(rec)
            d["lambda"] = d.pop("lambda_")
            row.update(d)
            row["kind"] = "record"
            lines.append("\t".join(_fmt(row[c]) for c in COLUMNS))
        row = {c: None for c in COLUMNS}
        row.update(asdict(cell.params))
        row.update(cell.aggregates)
        row["kind"] = "aggregate"
        lines.append("\t".join(_fmt(row[c]) for c in COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n")


def read_results(path) -> list[CellResult]:
    from .errors import ParseError

    cells: dict[CellParams, dict] = {}
    order: list[CellParams] = []
    header_seen = False
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if not header_seen:
                if parts != COLUMNS:
                    raise ParseError("unexpected column header", path=path, line=lineno)
                header_seen = True
                continue
            if len(parts) != len(COLUMNS):
                raise ParseError(f"expected {len(COLUMNS)} fields, got {len(parts)}", path=path, line=lineno)
            try:
                row = {c: _parse(c, t) for c, t in zip(COLUMNS, parts)}
            except ValueError as exc:
                raise ParseError(str(exc), path=path, line=lineno) from exc
            params = CellParams(row["n"], row["s"], row["alpha"], row["p_sc"], row["p_fc"])
            if params not in cells:
                cells[params] = {"records": [], "aggregates": None}
                order.append(params)
            if row["kind"] == "record":
                kw = {c: row[c] for c in RECORD_COLUMNS if c != "kind"}
                kw["lambda_"] = kw.pop("lambda")
                cells[params]["records"].append(Record(**kw))
            elif row["kind"] == "aggregate":
                cells[params]["aggregates"] = {c: row[c] for c in AGGREGATE_COLUMNS}
            else:
                raise ParseError(f"unknown row kind {row['kind']!r}", path=path, line=lineno)
    if not header_seen:
        raise ParseError("missing column header", path=path)
    out = []
    for p in order:
        c = cells[p]
        if c["aggregates"] is None:
            raise ParseError(f"cell {p} has no aggregate row", path=path)
        out.append(CellResult(p, tuple(c["records"]), c["aggregates"]))
    return out


# ---------------------------------------------------------------- heatmaps

def heatmap_grid(results: Sequence[CellResult], metric: str, aggregate: str,
                 fixed_params: dict | None = None):
    """Rows = p_sc, columns = p_fc, both in first-appearance (grid) order.

    Returns ``(grid, p_sc_axis, p_fc_axis)`` with NaN for undefined cells.
    """
    if metric not in METRICS:
        raise InvalidArgument(f"unknown metric {metric!r}; expected one of {', '.join(METRICS)}")
    if aggregate not in AGGREGATES:
        raise InvalidArgument(f"unknown aggregate {aggregate!r}; expected one of {', '.join(AGGREGATES)}")
    fixed_params = dict(fixed_params or {})
    combos = list(dict.fromkeys((c.params.n, c.params.s, c.params.alpha) for c in results))
    want = [k for k in combos if all(
        float(fixed_params[name]) == val for name, val in zip(("n", "s", "alpha"), k) if name in fixed_params)]
    if not want:
        raise InvalidArgument(f"no results match fixed parameters {fixed_params}")
    if len(want) > 1:
        raise InvalidArgument(f"fixed parameters {fixed_params} match several (n, s, alpha) combinations: {want}; "
                              "specify n, s and alpha")
    key = want[0]
    p_sc_axis = list(dict.fromkeys(c.params.p_sc for c in results))
    p_fc_axis = list(dict.fromkeys(c.params.p_fc for c in results))
    lookup = {(c.params.p_sc, c.params.p_fc): c for c in results
              if (c.params.n, c.params.s, c.params.alpha) == key}
    missing = [(a, b) for a in p_sc_axis for b in p_fc_axis if (a, b) not in lookup]
    if missing:
        raise MissingCells(missing)
    grid = np.full((len(p_sc_axis), len(p_fc_axis)), np.nan)
    for i, a in enumerate(p_sc_axis):
        for j, b in enumerate(p_fc_axis):
            v = lookup[(a, b)].aggregates[f"{metric}_{aggregate}"]
            if v is not None:
                grid[i, j] = v
    return grid, p_sc_axis, p_fc_axis


def emit_heatmap(results: Sequence[CellResult], metric: str, aggregate: str,
                 fixed_params: dict | None, output_path, header: str | None = None) -> tuple[Path, Path]:
    """Write the grid (``NA`` for undefined) and a ``.axes`` sidecar with the density values."""
    grid, p_sc_axis, p_fc_axis = heatmap_grid(results, metric, aggregate, fixed_params)
    out = Path(output_path)
    axes = out.with_name(out.name + ".axes")
    lines = [header] if header else []
    for row in grid:
        lines.append("\t".join(NA if np.isnan(v) else repr(float(v)) for v in row))
    out.write_text("\n".join(lines) + "\n")
    ax_lines = [header] if header else []
    ax_lines.append("p_sc\t" + "\t".join(repr(float(v)) for v in p_sc_axis))
    ax_lines.append("p_fc\t" + "\t".join(repr(float(v)) for v in p_fc_axis))
    axes.write_text("\n".join(ax_lines) + "\n")
    return out, axes


def read_heatmap(path) -> tuple[np.ndarray, list[float], list[float]]:
    out = Path(path)
    rows = [ln.split("\t") for ln in out.read_text().splitlines() if ln and not ln.startswith("#")]
    grid = np.array([[np.nan if t == NA else float(t) for t in r] for r in rows], dtype=float)
    axes = {}
    for ln in out.with_name(out.name + ".axes").read_text().splitlines():
        if ln and not ln.startswith("#"):
            name, *vals = ln.split("\t")
            axes[name] = [float(v) for v in vals]
    return grid, axes["p_sc"], axes["p_fc"]


def iter_records(results: Iterable[CellResult]):
    for cell in results:
        yield from cell.records
