"""Command-line driver: ``instanton-lab <suite> [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage errors.  Reports are JSON (see :mod:`instanton_lab.report`).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import suites
from .liealg import format_table, table_algebra
from .quat import write_nahm_csv
from .yangmills import write_csv

SEED_ENV = "INSTANTON_LAB_SEED"


def _positive(name):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if not value > 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return value

    return parse


def _count(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("count must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help=f"random seed (default 0; ${SEED_ENV} overrides)")
    common.add_argument("--timestamp", action="store_true", help="add a timestamp outside the hashed body")

    p = argparse.ArgumentParser(prog="instanton-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="suite")

    a = sub.add_parser("algebra", parents=[common], help="stabilizer, table and Hodge checks")
    a.add_argument("--dump-table", choices=suites.INSTANTON_GEOMETRIES, help="also write a printed table")
    a.add_argument("--table-out", help="file for --dump-table (default stderr)")

    i = sub.add_parser("instanton", parents=[common], help="basic radial instantons")
    i.add_argument("--geometry", choices=suites.INSTANTON_GEOMETRIES, required=True)
    i.add_argument("--C", type=_positive("C"), default=1.0, dest="C")
    i.add_argument("--points", type=_count, default=100)
    i.add_argument("--fd-step", type=_positive("fd-step"), default=1e-5)
    i.add_argument("--tol", type=_positive("tol"), default=1e-4)

    n = sub.add_parser("negative", parents=[common], help="the radial ansatz fails for su(3) and sp(2)")
    n.add_argument("--geometry", choices=suites.NEGATIVE_GEOMETRIES, help="default: both, plus controls")

    y = sub.add_parser("ym", parents=[common], help="radial Yang-Mills system")
    y.add_argument("--r0", type=_positive("r0"), default=0.1)
    y.add_argument("--u0", type=float, help="default: the C = 1 instanton value")
    y.add_argument("--v0", type=float, default=0.0)
    y.add_argument("--r-end", type=_positive("r-end"), default=50.0)
    y.add_argument("--step", type=_positive("step"), default=1e-3)
    y.add_argument("--csv", help="write the trajectory (r,u,v,a)")

    m = sub.add_parser("nahm", parents=[common], help="Nahm-equation instantons on H^n")
    m.add_argument("--solution", choices=("pole", "file"), default="pole")
    m.add_argument("--solution-file", help="CSV trajectory for --solution file")
    m.add_argument("--f", dest="field", help="field family, e.g. 'asd:A=1,A1=0.5' or 'h2:f1.A=1,C1=1'")
    m.add_argument("--dim", type=int, choices=(1, 2), default=1)
    m.add_argument("--points", type=_count, default=50)
    m.add_argument("--csv", help="write T(s) samples (s, T1.., T2.., T3..)")

    sub.add_parser("all", parents=[common], help="every suite with default settings")
    return p


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return args.seed
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer")


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = _seed(args)
    try:
        if args.command == "algebra":
            rep = suites.algebra_suite()
            if args.dump_table:
                text = format_table(table_algebra(args.dump_table))
                if args.table_out:
                    Path(args.table_out).write_text(text)
                else:
                    sys.stderr.write(text)
        elif args.command == "instanton":
            rep = suites.instanton_suite(args.geometry, args.C, args.points, args.fd_step, args.tol, seed)
        elif args.command == "negative":
            geoms = (args.geometry,) if args.geometry else suites.NEGATIVE_GEOMETRIES
            rep = suites.negative_suite(geoms, controls=args.geometry is None)
        elif args.command == "ym":
            rep, traj = suites.ym_suite(args.r0, args.u0, args.v0, args.r_end, args.step)
            if args.csv:
                with open(args.csv, "w", newline="") as fh:
                    write_csv(traj, fh)
        elif args.command == "nahm":
            rep, sol = suites.nahm_suite(args.solution, args.field, args.dim, args.points, seed, args.solution_file)
            if args.csv:
                import numpy as np

                s_values = sol.samples["s"] if sol.samples else np.geomspace(0.1, 10.0, 2001)
                with open(args.csv, "w", newline="") as fh:
                    write_nahm_csv(sol, fh, s_values)
        else:
            rep = suites.all_suite(seed)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))
    text = rep.to_json(timestamp=args.timestamp)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
