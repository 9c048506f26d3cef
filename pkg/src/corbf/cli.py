"""Command-line benchmark front end.

corbf run <task> [--arch LIST] [--runs N] [--epochs T] [--eta R] [--seed S]
                 [--jobs J] [--out DIR] [--funapprox-target NAME]
                 [--sysid-centers NAME]
corbf report <DIR>
corbf bound <task>

Exit status: 0 success, 1 every run diverged, 2 invalid configuration or
unusable input (bad arguments, unwritable output, missing artifacts).
"""

from __future__ import annotations

import argparse
import sys

from .bench import (ARCHITECTURES, TASKS, ExperimentConfig, bound_probe,
                    compare_report, run_experiment)
from .errors import CorbfError
from .tasks import DEFAULT_FUNAPPROX_TARGET

# "custom" selects the alternative documented reading of the 2-D target (the
# constant f(x) = 1 surface); the canonical task-level name is "constant-one".
_FUNAPPROX_CHOICES = ("exp-x1sq-minus-x2sq", "custom", "constant-one")


def _parse_arch_list(text: str) -> tuple[str, ...]:
    parts = tuple(p.strip() for p in text.split(",") if p.strip())
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corbf",
        description="Multi-kernel RBF network benchmarks "
                    "(iris / funapprox / sysid).")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one benchmark task and write artifacts")
    run.add_argument("task", choices=TASKS)
    run.add_argument("--arch", default=",".join(ARCHITECTURES),
                     help="comma-separated architecture list "
                          f"(subset of {', '.join(ARCHITECTURES)})")
    run.add_argument("--runs", type=int, default=20, metavar="N",
                     help="seeded repetitions per architecture (default 20)")
    run.add_argument("--epochs", type=int, default=None, metavar="T",
                     help="training epochs (default: task preset)")
    run.add_argument("--eta", type=float, default=None, metavar="R",
                     help="learning rate (default: task preset)")
    run.add_argument("--seed", type=int, default=0, metavar="S",
                     help="root seed; run r uses S + r (default 0)")
    run.add_argument("--jobs", type=int, default=1, metavar="J",
                     help="concurrent runs (default 1)")
    run.add_argument("--out", default="corbf-results", metavar="DIR",
                     help="output directory (default corbf-results)")
    run.add_argument("--funapprox-target", choices=_FUNAPPROX_CHOICES,
                     default=DEFAULT_FUNAPPROX_TARGET,
                     help="2-D target function; 'custom' is the constant "
                          "f(x)=1 alternative reading")
    run.add_argument("--sysid-centers",
                     choices=("symmetric", "repeated-endpoint"),
                     default="symmetric",
                     help="center list for the identification task")

    report = sub.add_parser("report",
                            help="summarize an artifact directory against "
                                 "the published reference figures")
    report.add_argument("directory")

    bound = sub.add_parser("bound",
                           help="print the stable learning-rate bound for a "
                                "task's default design")
    bound.add_argument("task", choices=TASKS)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            target = args.funapprox_target
            if target == "custom":
                target = "constant-one"
            cfg = ExperimentConfig(
                task=args.task,
                architectures=_parse_arch_list(args.arch),
                runs=args.runs,
                seed=args.seed,
                out_dir=args.out,
                epochs=args.epochs,
                eta=args.eta,
                jobs=args.jobs,
                funapprox_target=target,
                sysid_centers=args.sysid_centers,
            )
            status = run_experiment(cfg)
            if status == 0:
                print(f"wrote artifacts to {cfg.out_dir}")
            else:
                print(f"all runs diverged; manifest in {cfg.out_dir}",
                      file=sys.stderr)
            return status
        if args.command == "report":
            sys.stdout.write(compare_report(args.directory))
            return 0
        probe = bound_probe(args.task)
        verdict = "respects" if probe["respects"] else "violates"
        print(f"task: {probe['task']}")
        print(f"learning-rate bound (1/lambda_max): {probe['bound']:.6g}")
        print(f"task default eta: {probe['eta']:.6g} ({verdict} the bound)")
        return 0
    except CorbfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
