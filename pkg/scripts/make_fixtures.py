"""Write the hand-built trajectories as flagged CSV files."""

import argparse
from pathlib import Path

import numpy as np

from subtraj import fixtures
from subtraj.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--seed", type=int, default=0, help="seed for the planted instance")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    planted = fixtures.planted_instance(np.random.default_rng(args.seed))
    made = {
        "straight_line.csv": fixtures.straight_line(),
        "bump_loops.csv": fixtures.bump_loops(),
        "interleaved_motifs.csv": fixtures.interleaved_motifs(),
        "planted.csv": (planted.curve, planted.breakpoints),
    }
    for name, (P, bps) in made.items():
        write_csv(args.outdir / name, P, bps)
        print(f"{args.outdir / name}: {P.n} vertices, {bps.m} breakpoints")


if __name__ == "__main__":
    main()
