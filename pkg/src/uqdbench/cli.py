"""Command-line interface.

Subcommands:
  list-tasks   task catalog with noise locations, defaults and constraints
  run          execute a config file's task x algo x replication matrix
  correct      standalone corrected-archive pass over an archive CSV
  summarize    median/quartile summary of a metrics.csv
  bench        time the compiled kernels against the pure-numpy fallback
"""

import argparse
import os
import sys

from uqdbench import BACKEND, __version__, harness, metrics, solvers, tasks
from uqdbench.archive import GridArchive, fmt17
from uqdbench.errors import ConfigurationError, UsageError
from uqdbench.rng import DOMAIN_REEVAL, RngStream, stream_key


def _cmd_list_tasks(_args):
    rows = []
    for tid in tasks.TaskId:
        spec = tasks.make_task(tid)
        params = ", ".join(f"{k}={v}" for k, v in spec.params.items()) or "-"
        rows.append((tid.value, spec.location.value, spec.dist.kind.value,
                     spec.arm.fitness_mode.value, params,
                     tasks.TASK_CONSTRAINTS[tid]))
    headers = ("task", "location", "distribution", "fitness", "defaults", "constraints")
    widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) for i in range(6)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(fmt.format(*headers))
    print(fmt.format(*("-" * w for w in widths)))
    for r in rows:
        print(fmt.format(*r))
    print(f"\nalgorithms: {', '.join(a.value for a in solvers.Algo)}")
    return 0


def _cmd_run(args):
    with open(args.config) as f:
        document = f.read()
    cfg = harness.parse_config(document)
    overrides = {}
    if args.out is not None:
        overrides["output_dir"] = args.out
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        from dataclasses import replace
        cfg = replace(cfg, **overrides)
    manifest = harness.run_experiment(cfg)
    n_runs = len(manifest["runs"])
    print(f"completed {n_runs} run(s) -> {cfg.output_dir} "
          f"(config {manifest['config_hash'][:12]}, backend {BACKEND})")
    return 0


def _parse_grid(text):
    try:
        rows, cols = text.lower().split("x")
        return int(rows), int(cols)
    except ValueError:
        raise ConfigurationError(f"--grid expects ROWSxCOLS, got {text!r}")


def _cmd_correct(args):
    task = tasks.make_task(args.task)
    offset = solvers.qd_offset_for(task)
    archive = GridArchive.from_csv(args.archive, resolution=_parse_grid(args.grid),
                                   offset=offset)
    rng = RngStream(args.seed, stream_key(DOMAIN_REEVAL, 0))
    corrected = metrics.build_corrected(archive, task, args.reevals, rng)
    out = args.out or (os.path.splitext(args.archive)[0] + "_corrected.csv")
    corrected.archive.to_csv(out)
    repro_out = os.path.splitext(out)[0] + "_repro.csv"
    metrics.reproducibility_to_csv(metrics.reproducibility_archive(corrected), repro_out)
    record = metrics.full_record(0, archive, corrected)
    print(f"corrected archive -> {out}")
    print(f"reproducibility archive -> {repro_out}")
    for name in ("illusory_qd_score", "corrected_qd_score", "illusory_coverage",
                 "corrected_coverage", "loss_qd_score", "loss_coverage",
                 "reproducibility_score"):
        print(f"{name} = {fmt17(getattr(record, name))}")
    return 0


def _cmd_summarize(args):
    out = harness.summarize(args.input, args.out)
    print(f"summary -> {out}")
    return 0


def _cmd_bench(args):
    from uqdbench.bench import run_benchmark
    run_benchmark(size=args.size)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="uqd-bench",
        description="Uncertain Quality-Diversity benchmark suite (redundant arm)")
    p.add_argument("--version", action="version",
                   version=f"uqd-bench {__version__} (backend: {BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list-tasks", help="show the task catalog and constraints")

    run_p = sub.add_parser("run", help="run an experiment config")
    run_p.add_argument("--config", required=True, help="JSON config file")
    run_p.add_argument("--out", help="output directory (overrides config)")
    run_p.add_argument("--seed", type=int, help="master seed (overrides config)")
    run_p.add_argument("--workers", type=int, help="process pool size (overrides config)")

    cor_p = sub.add_parser("correct", help="corrected-archive pass over an archive CSV")
    cor_p.add_argument("--archive", required=True, help="illusory archive CSV")
    cor_p.add_argument("--task", required=True, help="task id the archive came from")
    cor_p.add_argument("--reevals", type=int, default=50, help="reevaluations per elite")
    cor_p.add_argument("--seed", type=int, default=0, help="reevaluation seed")
    cor_p.add_argument("--grid", default="100x100", help="grid resolution ROWSxCOLS")
    cor_p.add_argument("--out", help="output CSV path")

    sum_p = sub.add_parser("summarize", help="summarize a metrics.csv")
    sum_p.add_argument("--in", dest="input", required=True, help="directory with metrics.csv")
    sum_p.add_argument("--out", help="summary CSV path")

    bench_p = sub.add_parser("bench", help="compare compiled vs numpy kernels")
    bench_p.add_argument("--size", type=int, default=200_000,
                         help="elements per kernel timing")
    return p


_COMMANDS = {
    "list-tasks": _cmd_list_tasks,
    "run": _cmd_run,
    "correct": _cmd_correct,
    "summarize": _cmd_summarize,
    "bench": _cmd_bench,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigurationError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
