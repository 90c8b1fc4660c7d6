"""Command line entry point: ``crsym COMMAND JOB... [options]``.

Exit status is 0 on success, 1 for bad input (job file, expression,
hypersurface not in a supported normal form) and 2 when an internal
verification step fails.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from .jobs import COMMANDS, JobError, dump_json, load_job, render_text, run, with_overrides
from .lie import VerificationError
from .parser import ParseError
from .segre import HypersurfaceError
from .series import SeriesError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crsym", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("jobs", nargs="+", metavar="JOB", help="job file(s)")
    p.add_argument("--order", type=int, help="expansion order N of phi")
    p.add_argument("--ansatz-degree", type=int, help="symmetry jet degree D")
    p.add_argument("--dep-degree", type=int, help="degree bound of the dependence search")
    p.add_argument("--dep-order", type=int, help="order of the dependence search")
    p.add_argument("--kmax", type=int, help="longest Segre chain")
    p.add_argument("--seed", type=int, help="seed for random evaluation points")
    p.add_argument("--format", choices=("text", "json"), help="output format (default: from job, else text)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--workers", type=int, default=1, help="run several jobs in parallel")
    return p


def _one(args: tuple):
    path, command, overrides = args
    job = with_overrides(load_job(path), **overrides)
    return job.format, run(job, command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "order": args.order,
        "ansatz_degree": args.ansatz_degree,
        "dep_degree": args.dep_degree,
        "dep_order": args.dep_order,
        "kmax": args.kmax,
        "seed": args.seed,
    }
    tasks = [(path, args.command, overrides) for path in args.jobs]
    try:
        if args.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                results = list(pool.map(_one, tasks))
        else:
            results = [_one(t) for t in tasks]
    except (JobError, ParseError, HypersurfaceError, SeriesError, OSError) as exc:
        print(f"crsym: input error: {exc}", file=sys.stderr)
        return 1
    except (VerificationError, ArithmeticError) as exc:
        print(f"crsym: verification failure: {exc}", file=sys.stderr)
        return 2
    fmt = args.format or results[0][0]
    reports = [r for _, r in results]
    if fmt == "json":
        text = dump_json(reports[0] if len(reports) == 1 else reports)
    else:
        text = "\n".join(render_text(r) for r in reports)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
