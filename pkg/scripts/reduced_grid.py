"""Reduced p_SC x p_FC sweep (n=200, s=0.75, alpha=1) and its sigma / lambda heatmaps.

    python scripts/reduced_grid.py --output-dir runs/reduced --jobs 1
"""

import argparse
from pathlib import Path

import numpy as np

from fcsmallworld.cli import main
from fcsmallworld.sweep import read_heatmap

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "reduced_grid.json"


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", default=str(CONFIG))
    p.add_argument("--output-dir", default="runs/reduced")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--null-model", default="er", choices=("er", "maslov_sneppen"))
    return p.parse_args()


def show(path, label):
    grid, rows, cols = read_heatmap(path)
    print(f"\nmedian {label}; rows p_sc, columns p_fc")
    print("p_sc\\p_fc " + " ".join(f"{c:7.4f}" for c in cols))
    for r, line in zip(rows, grid):
        print(f"{r:9.4f} " + " ".join("     NA" if np.isnan(v) else f"{v:7.2f}" for v in line))


def main_():
    args = parse_args()
    out = Path(args.output_dir)
    rc = main(["sweep", "--config", args.config, "--seed", str(args.seed), "--jobs", str(args.jobs),
               "--null-model", args.null_model, "--output-dir", str(out)])
    if rc:
        raise SystemExit(rc)
    for metric in ("sigma", "lambda", "gamma"):
        target = out / f"{metric}_median.tsv"
        main(["heatmap", "--results", str(out / "results.tsv"), "--metric", metric, "--output", str(target)])
        show(target, metric)


if __name__ == "__main__":
    main_()
