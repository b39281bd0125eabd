"""Write the data behind every figure and the headline summary into one directory.

Runs each CLI subcommand with its default configuration; pass ``--config`` to
override sections. Add ``--gnuplot`` for plotting scripts.
"""
import argparse
import sys
from pathlib import Path

from qpgsim import cli

COMMANDS = ("gvm-map", "phasematching", "jsa", "operating-points", "report")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--config")
    ap.add_argument("--gnuplot", action="store_true")
    args = ap.parse_args()
    status = 0
    for name in COMMANDS:
        argv = [name, "--out", str(Path(args.out) / name)]
        if args.config:
            argv += ["--config", args.config]
        if args.gnuplot and name in cli.GNUPLOT:
            argv.append("--gnuplot")
        code = cli.main(argv)
        print(f"{name}: exit {code}")
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())
