"""Distribution of the finite-sample demo indices over many seeds.

    python scripts/demo_seeds.py --seeds 20 --output-dir runs/demo
"""

import argparse
import statistics
from pathlib import Path

from fcsmallworld.cli import main
from fcsmallworld.io import read_record


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--output-dir", default="runs/demo")
    return p.parse_args()


def main_():
    args = parse_args()
    out = Path(args.output_dir)
    rows = []
    for seed in range(args.seeds):
        main(["demo", "--seed", str(seed), "--output-dir", str(out / f"seed{seed}")])
        rows.append(read_record(out / f"seed{seed}" / "indices.tsv"))
    print("seed\tgamma\tlambda\tsigma\tsigma_vs_sc")
    for seed, r in enumerate(rows):
        print(f"{seed}\t{r['gamma']}\t{r['lambda']}\t{r['sigma']}\t{r['sc_reference_sigma']}")
    for key in ("gamma", "lambda", "sigma"):
        vals = [float(r[key]) for r in rows if r[key] != "undefined"]
        print(f"median {key}: {statistics.median(vals):.4f} ({len(vals)} defined)")


if __name__ == "__main__":
    main_()
