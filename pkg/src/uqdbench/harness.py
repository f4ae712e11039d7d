"""Experiment harness: replicated seeded runs over the task x algorithm
matrix, with all CSV outputs the plotting tools consume.

Output layout under the output directory:

    <task>/<algo>/rep<k>/archive_illusory.csv
    <task>/<algo>/rep<k>/archive_corrected.csv
    <task>/<algo>/rep<k>/archive_repro.csv
    metrics.csv      one row per metric snapshot
    summary.csv      median/quartiles per (task, algo, metric) at the final snapshot
    manifest.json    config echo + hash, per-run seeds, content hashes

Everything is derived from (config, master_seed); outputs are byte-identical
across reruns and worker counts.
"""

import concurrent.futures
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field, replace

import numpy as np

from uqdbench import __version__, metrics, solvers, tasks
from uqdbench.archive import fmt17
from uqdbench.errors import ConfigurationError
from uqdbench.rng import DOMAIN_REEVAL, DOMAIN_RUN, RngStream, fnv1a64, stream_key

METRICS_HEADER = ("task,algo,replication,evaluations,illusory_qd_score,"
                  "corrected_qd_score,illusory_coverage,corrected_coverage,"
                  "loss_qd_score,loss_coverage,reproducibility_score")
SUMMARY_HEADER = "task,algo,metric,median,q25,q75"
_METRIC_COLUMNS = ("illusory_qd_score", "corrected_qd_score", "illusory_coverage",
                   "corrected_coverage", "loss_qd_score", "loss_coverage",
                   "reproducibility_score")


@dataclass(frozen=True)
class TaskSelection:
    task_id: str
    overrides: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentConfig:
    tasks: tuple                  # TaskSelection, in run order
    algos: tuple                  # algorithm id strings, in run order
    replications: int = 10
    master_seed: int = 42
    solver: solvers.SolverConfig = field(default_factory=solvers.SolverConfig)
    n_reeval: int = 50
    correct_snapshots: str = "final"   # "final" or "all"
    sigma2_ref: float = metrics.SIGMA2_REF_DEFAULT
    gates: dict = field(default_factory=dict)  # acceptance thresholds, echoed to manifest
    output_dir: str = "uqd-out"
    workers: int = 1

    def run_seed(self, task_id, algo, replication):
        return stream_key(self.master_seed, DOMAIN_RUN,
                          fnv1a64(task_id), fnv1a64(algo), replication)


_SOLVER_KEYS = {"n_samples", "batch_size", "init_batch", "eval_budget",
                "sigma_iso", "sigma_line", "metric_period", "aggregator",
                "grid_resolution"}
_TOP_KEYS = {"tasks", "algos", "replications", "master_seed", "solver",
             "n_reeval", "correct_snapshots", "sigma2_ref", "gates", "output_dir",
             "workers"}


def parse_config(document):
    """Validate a JSON config (text, path contents, or dict) into an
    ExperimentConfig; unknown keys are rejected by name."""
    if isinstance(document, str):
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}")
    else:
        raw = dict(document)
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a JSON object")

    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config key(s): {sorted(unknown)}")
    for key in ("tasks", "algos"):
        if key not in raw or not raw[key]:
            raise ConfigurationError(f"config must list at least one entry in {key!r}")

    selections = []
    for entry in raw["tasks"]:
        if isinstance(entry, str):
            sel = TaskSelection(entry)
        elif isinstance(entry, dict):
            extra = set(entry) - {"id", "overrides"}
            if extra:
                raise ConfigurationError(f"unknown task entry key(s): {sorted(extra)}")
            if "id" not in entry:
                raise ConfigurationError("task entry missing 'id'")
            sel = TaskSelection(entry["id"], dict(entry.get("overrides", {})))
        else:
            raise ConfigurationError(f"task entry must be a string or object, got {entry!r}")
        tasks.make_task(sel.task_id, **sel.overrides)  # validates id + constraints
        selections.append(sel)

    algos = []
    for name in raw["algos"]:
        solvers.resolve_algo(name)
        algos.append(name)

    replications = int(raw.get("replications", 10))
    if replications < 1:
        raise ConfigurationError(f"replications must be >= 1, got {replications}")

    solver_raw = raw.get("solver", {})
    unknown = set(solver_raw) - _SOLVER_KEYS
    if unknown:
        raise ConfigurationError(f"unknown solver key(s): {sorted(unknown)}")
    if "grid_resolution" in solver_raw:
        solver_raw = dict(solver_raw)
        solver_raw["grid_resolution"] = tuple(solver_raw["grid_resolution"])
    solver = solvers.SolverConfig(**solver_raw)

    n_reeval = int(raw.get("n_reeval", 50))
    if n_reeval < 2:
        raise ConfigurationError(f"n_reeval must be >= 2, got {n_reeval}")
    correct_snapshots = raw.get("correct_snapshots", "final")
    if correct_snapshots not in ("final", "all"):
        raise ConfigurationError(
            f"correct_snapshots must be final|all, got {correct_snapshots!r}")
    sigma2_ref = float(raw.get("sigma2_ref", metrics.SIGMA2_REF_DEFAULT))
    if sigma2_ref <= 0:
        raise ConfigurationError(f"sigma2_ref must be > 0, got {sigma2_ref}")
    workers = int(raw.get("workers", 1))
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    gates = raw.get("gates", {})
    if not isinstance(gates, dict):
        raise ConfigurationError("gates must be an object")

    return ExperimentConfig(
        tasks=tuple(selections),
        algos=tuple(algos),
        replications=replications,
        master_seed=int(raw.get("master_seed", 42)),
        solver=solver,
        n_reeval=n_reeval,
        correct_snapshots=correct_snapshots,
        sigma2_ref=sigma2_ref,
        gates=dict(gates),
        output_dir=str(raw.get("output_dir", "uqd-out")),
        workers=workers,
    )


def config_to_dict(cfg):
    """Canonical JSON-ready form; excludes runtime-only fields so the config
    hash is stable across output paths and worker counts."""
    return {
        "tasks": [{"id": s.task_id, "overrides": dict(sorted(s.overrides.items()))}
                  for s in cfg.tasks],
        "algos": list(cfg.algos),
        "replications": cfg.replications,
        "master_seed": cfg.master_seed,
        "solver": {
            "n_samples": cfg.solver.n_samples,
            "batch_size": cfg.solver.batch_size,
            "init_batch": cfg.solver.init_batch,
            "eval_budget": cfg.solver.eval_budget,
            "sigma_iso": cfg.solver.sigma_iso,
            "sigma_line": cfg.solver.sigma_line,
            "metric_period": cfg.solver.metric_period,
            "aggregator": cfg.solver.aggregator,
            "grid_resolution": list(cfg.solver.grid_resolution),
        },
        "n_reeval": cfg.n_reeval,
        "correct_snapshots": cfg.correct_snapshots,
        "sigma2_ref": cfg.sigma2_ref,
        "gates": dict(sorted(cfg.gates.items())),
    }


def config_hash(cfg):
    text = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _atomic_write(path, text):
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _metrics_row(task_id, algo, rep, rec):
    def opt(v):
        return "" if v is None else fmt17(v)
    return ",".join([task_id, algo, str(rep), str(rec.evaluations_used),
                     fmt17(rec.illusory_qd_score), opt(rec.corrected_qd_score),
                     fmt17(rec.illusory_coverage), opt(rec.corrected_coverage),
                     opt(rec.loss_qd_score), opt(rec.loss_coverage),
                     opt(rec.reproducibility_score)])


def _execute_run(cfg, sel, algo_name, rep):
    """One (task, algo, replication) run; returns metric rows + files written."""
    task = tasks.make_task(sel.task_id, **sel.overrides)
    algo = solvers.resolve_algo(algo_name)
    solver_cfg = replace(cfg.solver, algo=algo)
    seed = cfg.run_seed(sel.task_id, algo_name, rep)
    correct_all = cfg.correct_snapshots == "all"
    snapshot_counter = [0]

    def hook(evals, archive):
        if not correct_all:
            qd, cov = metrics.illusory_scores(archive)
            return metrics.MetricsRecord(evaluations_used=evals, illusory_qd_score=qd,
                                         illusory_coverage=cov)
        reeval_rng = RngStream(seed, stream_key(DOMAIN_REEVAL, snapshot_counter[0]))
        snapshot_counter[0] += 1
        corrected = metrics.build_corrected(archive, task, cfg.n_reeval, reeval_rng)
        return metrics.full_record(evals, archive, corrected, cfg.sigma2_ref)

    result = solvers.run(task, solver_cfg, seed, snapshot_hook=hook)
    illusory = result.archive

    # the final corrected pass is mandatory and feeds the archives on disk
    final_rng = RngStream(seed, stream_key(DOMAIN_REEVAL, 0xFFFFFFFF))
    corrected = metrics.build_corrected(illusory, task, cfg.n_reeval, final_rng)
    final_evals = result.trace[-1].evaluations_used
    final_record = metrics.full_record(final_evals, illusory, corrected, cfg.sigma2_ref)

    rows = []
    for point in result.trace[:-1]:
        rows.append(_metrics_row(sel.task_id, algo_name, rep, point.record))
    rows.append(_metrics_row(sel.task_id, algo_name, rep, final_record))

    rep_dir = os.path.join(cfg.output_dir, sel.task_id, algo_name, f"rep{rep}")
    os.makedirs(rep_dir, exist_ok=True)
    files = {
        "archive_illusory.csv": os.path.join(rep_dir, "archive_illusory.csv"),
        "archive_corrected.csv": os.path.join(rep_dir, "archive_corrected.csv"),
        "archive_repro.csv": os.path.join(rep_dir, "archive_repro.csv"),
    }
    # per-run outputs land atomically: write-to-temp then rename
    for name, writer in (("archive_illusory.csv", illusory.to_csv),
                         ("archive_corrected.csv", corrected.archive.to_csv)):
        tmp = files[name] + ".tmp-part"
        writer(tmp)
        os.replace(tmp, files[name])
    tmp = files["archive_repro.csv"] + ".tmp-part"
    metrics.reproducibility_to_csv(
        metrics.reproducibility_archive(corrected, cfg.sigma2_ref), tmp)
    os.replace(tmp, files["archive_repro.csv"])
    rel = {k: os.path.relpath(v, cfg.output_dir) for k, v in files.items()}
    return rows, rel, seed


def _run_entry(args):
    cfg, sel, algo_name, rep = args
    return _execute_run(cfg, sel, algo_name, rep)


def run_experiment(cfg):
    """Run the full matrix; returns the manifest dict (also written to disk)."""
    os.makedirs(cfg.output_dir, exist_ok=True)
    jobs = [(cfg, sel, algo, rep)
            for sel in cfg.tasks for algo in cfg.algos
            for rep in range(cfg.replications)]

    results = {}
    failures = []
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = {pool.submit(_run_entry, j): j for j in jobs}
            for fut, job in futures.items():
                _, sel, algo, rep = job
                try:
                    results[(sel.task_id, algo, rep)] = fut.result()
                except Exception as exc:
                    failures.append({"task": sel.task_id, "algo": algo,
                                     "replication": rep, "error": str(exc)})
    else:
        for job in jobs:
            _, sel, algo, rep = job
            try:
                results[(sel.task_id, algo, rep)] = _run_entry(job)
            except Exception as exc:
                failures.append({"task": sel.task_id, "algo": algo,
                                 "replication": rep, "error": str(exc)})

    # metrics.csv in canonical (config task order, algo order, rep) order
    lines = [METRICS_HEADER]
    run_manifest = []
    for sel in cfg.tasks:
        for algo in cfg.algos:
            for rep in range(cfg.replications):
                key = (sel.task_id, algo, rep)
                if key not in results:
                    run_manifest.append({"task": sel.task_id, "algo": algo,
                                         "replication": rep, "status": "failed"})
                    continue
                rows, files, seed = results[key]
                lines.extend(rows)
                run_manifest.append({"task": sel.task_id, "algo": algo,
                                     "replication": rep, "status": "ok",
                                     "seed": f"{seed:016x}", "files": files})
    metrics_path = os.path.join(cfg.output_dir, "metrics.csv")
    _atomic_write(metrics_path, "\n".join(lines) + "\n")

    summary_text = summarize_text("\n".join(lines) + "\n")
    _atomic_write(os.path.join(cfg.output_dir, "summary.csv"), summary_text)

    file_hashes = {}
    for root, _dirs, names in os.walk(cfg.output_dir):
        for name in sorted(names):
            if name == "manifest.json" or name.startswith(".tmp-") \
                    or name.endswith(".tmp-part"):
                continue
            p = os.path.join(root, name)
            rel_p = os.path.relpath(p, cfg.output_dir)
            with open(p, "rb") as f:
                file_hashes[rel_p] = hashlib.sha256(f.read()).hexdigest()

    manifest = {
        "artifact": {"name": "uqdbench", "version": __version__},
        "config": config_to_dict(cfg),
        "config_hash": config_hash(cfg),
        "seed_rule": "stream_key(master_seed, DOMAIN_RUN, fnv1a64(task), fnv1a64(algo), replication)",
        "runs": run_manifest,
        "incomplete": failures,
        "files": dict(sorted(file_hashes.items())),
    }
    _atomic_write(os.path.join(cfg.output_dir, "manifest.json"),
                  json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    if failures:
        raise RuntimeError(f"{len(failures)} run(s) failed; see manifest.json")
    return manifest


def _percentiles(values):
    v = np.asarray(values, dtype=np.float64)
    med = float(np.percentile(v, 50, method="linear"))
    q25 = float(np.percentile(v, 25, method="linear"))
    q75 = float(np.percentile(v, 75, method="linear"))
    return med, q25, q75


def read_metrics_csv(text):
    """Parse metrics CSV text into a list of row dicts (floats or None)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != METRICS_HEADER:
        raise ConfigurationError(
            f"metrics CSV header mismatch: expected {METRICS_HEADER!r}")
    names = METRICS_HEADER.split(",")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(names):
            raise ConfigurationError(f"metrics row has {len(parts)} fields, "
                                     f"expected {len(names)}: {ln!r}")
        row = {"task": parts[0], "algo": parts[1], "replication": int(parts[2]),
               "evaluations": int(parts[3])}
        for name, val in zip(names[4:], parts[4:]):
            row[name] = None if val == "" else float(val)
        rows.append(row)
    return rows


def summarize_text(metrics_text):
    """summary.csv text: per (task, algo, metric) median and quartiles over
    replications at each replication's final snapshot."""
    rows = read_metrics_csv(metrics_text)
    finals = {}
    for row in rows:
        key = (row["task"], row["algo"], row["replication"])
        if key not in finals or row["evaluations"] >= finals[key]["evaluations"]:
            finals[key] = row

    groups = {}
    order = []
    for (task, algo, _rep), row in sorted(finals.items(), key=lambda kv: kv[0]):
        k = (task, algo)
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(row)

    lines = [SUMMARY_HEADER]
    for task, algo in order:
        group = groups[(task, algo)]
        for metric in _METRIC_COLUMNS:
            values = [r[metric] for r in group if r[metric] is not None]
            if not values:
                continue
            med, q25, q75 = _percentiles(values)
            lines.append(",".join([task, algo, metric, fmt17(med), fmt17(q25), fmt17(q75)]))
    return "\n".join(lines) + "\n"


def summarize(input_dir, output_path=None):
    """Summarize <input_dir>/metrics.csv; writes summary.csv next to it."""
    metrics_path = os.path.join(input_dir, "metrics.csv")
    if not os.path.exists(metrics_path):
        raise ConfigurationError(f"no metrics.csv under {input_dir}")
    with open(metrics_path) as f:
        text = f.read()
    out = summarize_text(text)
    if output_path is None:
        output_path = os.path.join(input_dir, "summary.csv")
    _atomic_write(output_path, out)
    return output_path
