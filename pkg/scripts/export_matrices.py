#!/usr/bin/env python3
"""Export generator matrices for the standard q = 2 family instances.

Writes one .matrix/.json pair per instance into the given directory (the
same format the `gkcodes build` subcommand produces) plus the rational
point table.  Everything is byte-reproducible.

Usage:
    python scripts/export_matrices.py [--outdir exports]
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from gkcodes.cli import main as cli_main                  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="exports")
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    cli_main(["points", "--p", "2", "--format", "csv",
              "--out", str(outdir / "points_q2.csv")])
    for family, m, s in [("C", 3, 0), ("Cprime", 3, 0), ("Cbar", 2, 1),
                         ("Ctilde", 3, 0)]:
        name = f"{family}_q2_m{m}" + (f"_s{s}" if s else "")
        cli_main(["build", "--p", "2", "--family", family, "--m", str(m),
                  "--s", str(s), "--out", str(outdir / name)])
    print(f"exports written to {outdir}/")


if __name__ == "__main__":
    main()
