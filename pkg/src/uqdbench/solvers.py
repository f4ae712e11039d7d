"""The three baselines: MAP-Elites, MAP-Elites-sampling and
MAP-Elites-sampling-reproducibility, sharing one generate-evaluate-insert loop.

Every random decision is keyed by structural indices (iteration, candidate,
sample), never by global draw order, so results are independent of evaluation
parallelism and identical across backends.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from uqdbench import _backend
from uqdbench.archive import Elite, GridArchive
from uqdbench.arm import FitnessMode
from uqdbench.errors import ConfigurationError, UsageError
from uqdbench.metrics import MetricsRecord, illusory_scores
from uqdbench.rng import (DOMAIN_EVAL, DOMAIN_INIT, DOMAIN_PARENT, DOMAIN_VARIATION,
                          RngStream, stream_key, stream_keys)
from uqdbench.tasks import evaluate_blocks


class Algo(Enum):
    ME = "me"
    ME_SAMPLING = "me-sampling"
    ME_SAMPLING_REPRO = "me-sampling-repro"


def resolve_algo(name):
    for a in Algo:
        if a.value == name:
            return a
    raise ConfigurationError(
        f"unknown algorithm {name!r}; known: {', '.join(a.value for a in Algo)}")


@dataclass(frozen=True)
class SolverConfig:
    """Defaults: the 2M-evaluation budget is the desk scale at which the
    uncertainty phenomena are visible on a 100x100 grid (a sampling run then
    sees ~66k candidates, enough to approach coverage saturation)."""

    algo: Algo = Algo.ME
    n_samples: int = 30           # forced to 1 for plain MAP-Elites
    batch_size: int = 64
    init_batch: int = 128
    eval_budget: int = 2_000_000
    sigma_iso: float = 0.01
    sigma_line: float = 0.2
    metric_period: int = 10       # iterations between metric snapshots
    aggregator: str = "mean"      # "mean" or "median" fitness/descriptor estimate
    grid_resolution: tuple = (100, 100)

    def __post_init__(self):
        if min(self.n_samples, self.batch_size, self.init_batch, self.metric_period) < 1:
            raise ConfigurationError("n_samples, batch_size, init_batch and "
                                     "metric_period must all be >= 1")
        if self.aggregator not in ("mean", "median"):
            raise ConfigurationError(f"aggregator must be mean|median, got {self.aggregator!r}")
        if self.eval_budget < self.init_batch * self.effective_n_samples:
            raise ConfigurationError(
                f"eval_budget {self.eval_budget} cannot cover the initial batch "
                f"({self.init_batch} x {self.effective_n_samples} evaluations)")

    @property
    def effective_n_samples(self):
        return 1 if self.algo is Algo.ME else self.n_samples


@dataclass(frozen=True)
class AggregateStats:
    est_fitness: float            # mean (or median) observed fitness
    descriptor: np.ndarray        # mean (or median) observed descriptor
    descriptor_variance: np.ndarray  # population variance about the mean


@dataclass(frozen=True)
class TracePoint:
    evaluations_used: int
    record: MetricsRecord


@dataclass(frozen=True)
class RunResult:
    archive: GridArchive
    trace: list


def iso_line_variation(p1, p2, bounds, rng, sigma_iso=0.01, sigma_line=0.2):
    """Iso+LineDD child of two parents, clipped to the angle bounds."""
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    if p1.shape != p2.shape:
        raise UsageError(f"parent shapes differ: {p1.shape} vs {p2.shape}")
    z = rng.normals(len(p1) + 1)
    lo, hi = bounds
    child = p1 + sigma_iso * (hi - lo) * z[:-1] + sigma_line * z[-1] * (p2 - p1)
    return np.clip(child, lo, hi)


def _variation_batch(parents1, parents2, bounds, key0, iteration, sigma_iso, sigma_line):
    b, n = parents1.shape
    sids = stream_keys((DOMAIN_VARIATION, iteration), np.arange(b))
    n_blocks = -(-(n + 1) // 4)
    words = _backend.philox_many(key0, sids, n_blocks)
    z = _backend.gauss_from_unit(
        _backend.u64_to_unit(words.reshape(-1))).reshape(b, 4 * n_blocks)[:, :n + 1]
    lo, hi = bounds
    children = parents1 + sigma_iso * (hi - lo) * z[:, :n] + \
        sigma_line * z[:, n:n + 1] * (parents2 - parents1)
    return np.clip(children, lo, hi)


def _median_axis1(x):
    return np.median(x, axis=1)


def aggregate_batch(fits, descs, method="mean"):
    """Per-candidate estimates from (B, S) fitnesses and (B, S, 2) descriptors.

    Variances are population variances about the mean regardless of the
    estimator choice (they feed the reproducibility metrics).
    """
    b, s, _ = descs.shape
    mean_f, _ = _backend.seq_mean_var(fits)
    mean_dx, var_dx = _backend.seq_mean_var(np.ascontiguousarray(descs[:, :, 0]))
    mean_dy, var_dy = _backend.seq_mean_var(np.ascontiguousarray(descs[:, :, 1]))
    if method == "median":
        est_f = _median_axis1(fits)
        est_dx = _median_axis1(descs[:, :, 0])
        est_dy = _median_axis1(descs[:, :, 1])
    else:
        est_f, est_dx, est_dy = mean_f, mean_dx, mean_dy
    desc = np.stack([np.clip(est_dx, 0.0, 1.0), np.clip(est_dy, 0.0, 1.0)], axis=1)
    var = np.stack([var_dx, var_dy], axis=1)
    return est_f, desc, var


def aggregate(samples, method="mean"):
    """Per-candidate statistics of a sequence of Evaluations."""
    if not samples:
        raise UsageError("aggregate needs at least one sample")
    fits = np.array([[e.fitness for e in samples]])
    descs = np.array([[e.descriptor for e in samples]])
    est_f, desc, var = aggregate_batch(fits, descs, method=method)
    return AggregateStats(float(est_f[0]), desc[0], var[0])


def competition_score(algo, stats):
    """What try_insert competes on: estimated fitness, or negated total
    descriptor variance for the reproducibility baseline (higher = better)."""
    if algo is Algo.ME_SAMPLING_REPRO:
        return -(float(stats.descriptor_variance[0]) + float(stats.descriptor_variance[1]))
    return float(stats.est_fitness)


def qd_offset_for(task):
    """QD-Score offset making every admissible fitness contribution positive."""
    if task.arm.fitness_mode is FitnessMode.NEG_JOINT_VARIANCE:
        lo, hi = task.arm.angle_bounds
        return ((hi - lo) / 2.0) ** 2
    return 1.0


def _insert_batch(task, cfg, archive, genotypes, key0, iteration):
    """Evaluate one batch of genotypes and insert them in candidate order."""
    b, n = genotypes.shape
    s = cfg.effective_n_samples
    sids = stream_keys((DOMAIN_EVAL, iteration),
                       np.arange(b)[:, None], np.arange(s)[None, :])
    blocks = _backend.philox_many(key0, sids.reshape(-1), 1)
    flat = np.repeat(genotypes, s, axis=0)
    fit, desc = evaluate_blocks(task, flat, blocks)
    fits = np.ascontiguousarray(fit.reshape(b, s))
    descs = desc.reshape(b, s, 2)
    est_f, est_d, var_d = aggregate_batch(fits, descs, method=cfg.aggregator)
    for c in range(b):
        stats = AggregateStats(float(est_f[c]), est_d[c], var_d[c])
        elite = Elite(genotype=genotypes[c].copy(),
                      fitness=competition_score(cfg.algo, stats),
                      descriptor=est_d[c],
                      n_samples=s,
                      aux={"est_fitness": float(est_f[c]),
                           "desc_var": var_d[c]})
        archive.try_insert(elite)
    return b * s


def run(task, cfg, master_seed, snapshot_hook=None):
    """Run one solver on one task within its evaluation budget.

    snapshot_hook(evaluations_used, archive) -> MetricsRecord is called every
    cfg.metric_period iterations and at the end; the default records
    illusory-side metrics only.
    """
    if snapshot_hook is None:
        def snapshot_hook(evals, archive):
            qd, cov = illusory_scores(archive)
            return MetricsRecord(evaluations_used=evals, illusory_qd_score=qd,
                                 illusory_coverage=cov)

    key0 = int(master_seed) & 0xFFFFFFFFFFFFFFFF
    offset = qd_offset_for(task)
    archive = GridArchive(resolution=cfg.grid_resolution, offset=offset)
    s = cfg.effective_n_samples
    arm = task.arm
    lo, hi = arm.angle_bounds
    n = arm.n_joints
    trace = []

    # initial batch: uniform genotypes in bounds, one stream per candidate
    sids = stream_keys((DOMAIN_INIT,), np.arange(cfg.init_batch))
    n_blocks = -(-n // 4)
    words = _backend.philox_many(key0, sids, n_blocks)
    u = _backend.u64_to_unit(words.reshape(-1)).reshape(cfg.init_batch, 4 * n_blocks)
    genotypes = lo + u[:, :n] * (hi - lo)
    evals = _insert_batch(task, cfg, archive, genotypes, key0, iteration=0)

    iteration = 0
    last_snapshot = -1
    while evals + cfg.batch_size * s <= cfg.eval_budget:
        iteration += 1
        parent_rng = RngStream(key0, stream_key(DOMAIN_PARENT, iteration))
        picks = parent_rng.integers(2 * cfg.batch_size, len(archive._order))
        order = archive._order
        p1 = np.stack([archive.cells[order[k]].genotype for k in picks[0::2]])
        p2 = np.stack([archive.cells[order[k]].genotype for k in picks[1::2]])
        children = _variation_batch(p1, p2, (lo, hi), key0, iteration,
                                    cfg.sigma_iso, cfg.sigma_line)
        evals += _insert_batch(task, cfg, archive, children, key0, iteration)
        if iteration % cfg.metric_period == 0:
            trace.append(TracePoint(evals, snapshot_hook(evals, archive)))
            last_snapshot = iteration
    if last_snapshot != iteration or not trace:
        trace.append(TracePoint(evals, snapshot_hook(evals, archive)))
    return RunResult(archive=archive, trace=trace)
