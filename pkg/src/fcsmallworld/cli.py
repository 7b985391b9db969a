"""Command-line entry point: ``demo``, ``analyze``, ``sweep``, ``heatmap``.

Sweep parameters resolve with precedence: command-line flag > config file >
built-in default. Every output file starts with a ``#`` comment line naming
the package version and the resolved parameters; execution-only settings
(``--jobs``, output paths) are left out so that outputs depend only on the
scientific inputs.

On failure the process prints one line ``error: <category>: <message>`` to
stderr and exits with status 2 (usage) or 1 (anything else).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, FCSWError, InvalidArgument, ParseError
from .fc import CorrelationMatrix, binarize_to_density
from .graph import BinaryGraph, GraphMetrics, metrics
from .io import (
    read_edgelist,
    read_matrix,
    sniff_format,
    write_edgelist,
    write_matrix,
    write_record,
)
from .nullmodels import er_matched, maslov_sneppen, small_world
from .rng import derive_seed
from .sweep import (
    AGGREGATES,
    LARGE_SWEEP_UNITS,
    METRICS,
    SweepConfig,
    emit_heatmap,
    evaluate_fc,
    header_line,
    read_results,
    realize_correlation,
    run_sweep,
    write_results,
)


class UsageError(FCSWError):
    category = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v) -> str:
    return "undefined" if v is None else repr(float(v))


def _metrics_record(prefix: str, m: GraphMetrics) -> dict:
    return {
        f"{prefix}clustering": repr(m.clustering),
        f"{prefix}avg_path_length": _fmt(m.avg_path_length),
        f"{prefix}density": repr(m.density),
        f"{prefix}n_components": str(m.n_components),
        f"{prefix}finite_pair_fraction": repr(m.finite_pair_fraction),
    }


def _write_manifest(path: Path, command: str, params: dict, seed, outputs, started: float) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "parameters": params,
        "master_seed": seed,
        "outputs": [str(p) for p in outputs],
        "duration_s": round(time.perf_counter() - started, 3),
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _print_indices(label: str, idx) -> None:
    print(f"{label}gamma={_fmt(idx.gamma)} lambda={_fmt(idx.lambda_)} sigma={_fmt(idx.sigma)}")


# ---------------------------------------------------------------- demo

def cmd_demo(args) -> dict:
    started = time.perf_counter()
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = {"n": args.n, "t_len": args.t_len, "p_sc": args.p_sc, "p_fc": args.p_sc,
              "s": args.s, "alpha": args.alpha, "burn_in": args.burn_in, "null_model": "er"}
    config = SweepConfig([args.n], [args.s], [args.alpha], [args.p_sc], [args.p_sc],
                         master_seed=args.seed, realizations=1, mode="finite",
                         t_len=args.t_len, burn_in=args.burn_in)
    head = header_line("demo", {**params, "seed": args.seed})
    real = realize_correlation(args.n, args.s, args.alpha, args.p_sc, 0, args.seed, config)
    res = evaluate_fc(real, args.p_sc, 0, args.seed, config)
    rec = res.record
    sc_graph = BinaryGraph(real.sc.adjacency)
    sc_metrics = metrics(sc_graph)
    # the SC is itself an ER draw at the same density, so it also serves as a reference
    vs_sc = small_world(res.fc_graph, sc_graph, "structural", rec.sc_seed,
                        g_metrics=res.fc_metrics, null_metrics=[sc_metrics])

    files = {
        "sc": out / "sc_matrix.txt",
        "correlation": out / "correlation_matrix.txt",
        "fc": out / "fc_graph.edges",
        "null": out / "null_graph.edges",
        "metrics": out / "metrics.tsv",
        "indices": out / "indices.tsv",
    }
    write_matrix(files["sc"], real.sc.adjacency, header=head)
    write_matrix(files["correlation"], real.correlation.entries, header=head)
    write_edgelist(files["fc"], res.fc_graph, header=head)
    write_edgelist(files["null"], res.nulls[0], header=head)
    m = {**_metrics_record("fc_", res.fc_metrics), **_metrics_record("sc_", sc_metrics),
         **_metrics_record("null_", metrics(res.nulls[0]))}
    write_record(files["metrics"], m, header=head)
    idx = {
        "gamma": _fmt(rec.gamma), "lambda": _fmt(rec.lambda_), "sigma": _fmt(rec.sigma),
        "null_model": "er", "null_seed": str(rec.null_seed),
        "sc_reference_gamma": _fmt(vs_sc.gamma), "sc_reference_lambda": _fmt(vs_sc.lambda_),
        "sc_reference_sigma": _fmt(vs_sc.sigma),
        "sc_seed": str(rec.sc_seed), "noise_seed": str(rec.noise_seed), "tie_seed": str(rec.tie_seed),
    }
    write_record(files["indices"], idx, header=head)

    print(f"FC: C={m['fc_clustering']} L={m['fc_avg_path_length']}  SC: C={m['sc_clustering']} "
          f"L={m['sc_avg_path_length']}")
    print(f"gamma={idx['gamma']} lambda={idx['lambda']} sigma={idx['sigma']}")
    _print_indices("vs SC: ", vs_sc)
    return {"manifest": _write_manifest(out / "manifest.json", "demo", params, args.seed,
                                        files.values(), started),
            "record": rec}


# ---------------------------------------------------------------- analyze

def _load_graph_or_matrix(args) -> tuple[BinaryGraph, dict]:
    path = args.path
    fmt = args.format if args.format != "auto" else sniff_format(path)
    info = {"input_format": fmt}
    if fmt == "edges":
        if args.p_fc is not None:
            raise UsageError("--p-fc applies to correlation-matrix input only")
        return read_edgelist(path), info
    m = read_matrix(path)
    diag = np.diag(m)
    is_adjacency = np.all((m == 0) | (m == 1)) and np.all(diag == 0)
    if is_adjacency and args.p_fc is None:
        info["input_format"] = "adjacency"
        try:
            return BinaryGraph(m.astype(bool)), info
        except InvalidArgument as exc:
            raise ParseError(str(exc), path=path) from exc
    if args.p_fc is None:
        raise UsageError("correlation-matrix input requires --p-fc")
    try:
        corr = CorrelationMatrix(m)
    except InvalidArgument as exc:
        raise ParseError(f"not a valid correlation matrix: {exc}", path=path) from exc
    b = binarize_to_density(corr, args.p_fc, derive_seed(args.seed, "tie"), absolute=args.absolute)
    info.update(input_format="correlation", requested_density=b.requested_density,
                achieved_density=b.achieved_density, empty=b.empty)
    return b.graph, info


def cmd_analyze(args) -> dict:
    started = time.perf_counter()
    g, info = _load_graph_or_matrix(args)
    null_seed = derive_seed(args.seed, "null")
    partial = False
    if args.null_model == "er":
        null = er_matched(g, null_seed)
    elif g.n_edges < 2:
        null, partial = g, True
    else:
        rw = maslov_sneppen(g, args.swap_factor, null_seed)
        null, partial = rw.graph, rw.partial
    gm, nm = metrics(g), metrics(null)
    idx = small_world(g, null, args.null_model, null_seed, g_metrics=gm, null_metrics=[nm])
    rec = {**_metrics_record("", gm), **idx.as_record()}
    if partial:
        rec["null_partial"] = "true"
    for k, v in info.items():
        rec[k] = v if isinstance(v, str) else json.dumps(v)
    for k, v in rec.items():
        print(f"{k}\t{v}")
    result = {"record": rec, "graph": g, "null": null}
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        params = {"path": str(args.path), "p_fc": args.p_fc, "null_model": args.null_model,
                  "swap_factor": args.swap_factor, "absolute": args.absolute, "format": args.format}
        head = header_line("analyze", {**params, "seed": args.seed})
        files = [out / "graph.edges", out / "null_graph.edges", out / "analysis.tsv"]
        write_edgelist(files[0], g, header=head)
        write_edgelist(files[1], null, header=head)
        write_record(files[2], rec, header=head)
        result["manifest"] = _write_manifest(out / "manifest.json", "analyze", params, args.seed, files, started)
    return result


# ---------------------------------------------------------------- sweep

_LIST_FLAGS = {
    "n_values": int, "s_values": float, "alpha_values": float,
    "p_sc_values": float, "p_fc_values": float,
}
_SCALAR_FLAGS = {
    "realizations": int, "mode": str, "t_len": int, "burn_in": int, "null_model": str,
    "er_variant": str, "n_nulls": int, "swap_factor": float, "sc_weights": str,
    "path_length": str,
}


def _resolve_sweep_config(args) -> SweepConfig:
    data = {}
    if args.config:
        path = Path(args.config)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise FCSWError(f"{path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, path=path, line=exc.lineno) from exc
        if not isinstance(data, dict):
            raise ConfigError("<root>", "configuration must be a JSON object")
    for key, conv in _LIST_FLAGS.items():
        raw = getattr(args, key)
        if raw is not None:
            try:
                data[key] = [conv(v) for v in raw.split(",") if v.strip()]
            except ValueError:
                raise ConfigError(key, f"cannot parse {raw!r}") from None
    for key in _SCALAR_FLAGS:
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    for key in ("connected_only", "absolute"):
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    data["master_seed"] = args.seed
    return SweepConfig.from_dict(data)


def cmd_sweep(args) -> dict:
    started = time.perf_counter()
    config = _resolve_sweep_config(args)
    if config.n_units() > LARGE_SWEEP_UNITS:
        print(f"warning: {config.n_units()} cell-realizations requested; this may take hours",
              file=sys.stderr)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = config.to_dict()
    head = header_line("sweep", params)
    results = run_sweep(config, jobs=args.jobs)
    files = [out / "results.tsv", out / "config.json"]
    write_results(results, files[0], header=head)
    files[1].write_text(json.dumps(params, indent=2, sort_keys=True) + "\n")
    n_def = sum(1 for c in results if c.aggregates["sigma_median"] is not None)
    print(f"{len(results)} cells, {n_def} with defined median sigma -> {files[0]}")
    return {"manifest": _write_manifest(out / "manifest.json", "sweep", {**params, "jobs": args.jobs},
                                        config.master_seed, files, started),
            "results": results}


# ---------------------------------------------------------------- heatmap

def cmd_heatmap(args) -> dict:
    started = time.perf_counter()
    results = read_results(args.results)
    fixed = {k: getattr(args, k) for k in ("n", "s", "alpha") if getattr(args, k) is not None}
    params = {"results": str(args.results), "metric": args.metric, "aggregate": args.aggregate, **fixed}
    head = header_line("heatmap", {k: v for k, v in params.items() if k != "results"})
    grid_path, axes_path = emit_heatmap(results, args.metric, args.aggregate, fixed, args.output, header=head)
    print(f"wrote {grid_path} and {axes_path}")
    manifest = Path(str(args.output) + ".manifest.json")
    return {"manifest": _write_manifest(manifest, "heatmap", params, None, [grid_path, axes_path], started)}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fcsmallworld", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("demo", help="finite-sample example: N=100, T=300, p_SC=p_FC=0.1, s=0.1, alpha=2")
    d.add_argument("--seed", type=int, required=True)
    d.add_argument("--output-dir", required=True)
    d.add_argument("--n", type=int, default=100)
    d.add_argument("--t-len", type=int, default=300)
    d.add_argument("--p-sc", type=float, default=0.1)
    d.add_argument("--s", type=float, default=0.1)
    d.add_argument("--alpha", type=float, default=2.0)
    d.add_argument("--burn-in", type=int, default=None)
    d.set_defaults(func=cmd_demo)

    a = sub.add_parser("analyze", help="metrics and small-world indices of a graph or correlation matrix")
    a.add_argument("path")
    a.add_argument("--p-fc", type=float, default=None, help="target density (correlation input)")
    a.add_argument("--null-model", choices=("er", "maslov_sneppen"), default="er")
    a.add_argument("--swap-factor", type=float, default=10.0)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--format", choices=("auto", "matrix", "edges"), default="auto")
    a.add_argument("--absolute", action="store_true", help="threshold |correlation|")
    a.add_argument("--output-dir", default=None)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="parameter sweep from a JSON config")
    s.add_argument("--config", default=None)
    s.add_argument("--output-dir", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    for key in _LIST_FLAGS:
        s.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help="comma-separated list")
    for key, conv in _SCALAR_FLAGS.items():
        s.add_argument("--" + key.replace("_", "-"), dest=key, type=conv, default=None)
    s.add_argument("--connected-only", dest="connected_only", action="store_true", default=None)
    s.add_argument("--no-connected-only", dest="connected_only", action="store_false")
    s.add_argument("--absolute", dest="absolute", action="store_true", default=None)
    s.set_defaults(func=cmd_sweep)

    h = sub.add_parser("heatmap", help="p_SC x p_FC grid of an aggregated index")
    h.add_argument("--results", required=True)
    h.add_argument("--metric", choices=METRICS, required=True)
    h.add_argument("--aggregate", choices=AGGREGATES, default="median")
    h.add_argument("--n", type=int, default=None)
    h.add_argument("--s", type=float, default=None)
    h.add_argument("--alpha", type=float, default=None)
    h.add_argument("--output", required=True)
    h.set_defaults(func=cmd_heatmap)
    return p


def run(argv=None) -> dict:
    """Parse and execute; raises on error (used by tests)."""
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        raise UsageError("--jobs must be >= 1")
    return args.func(args)


def main(argv=None) -> int:
    try:
        run(argv)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except FCSWError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
