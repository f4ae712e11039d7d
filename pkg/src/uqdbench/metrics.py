"""Archive quality under uncertainty: corrected archives, loss metrics and
the reproducibility score.

The illusory archive is what the optimizer believes; the corrected archive
re-evaluates every stored elite many times, recomputes mean fitness and mean
descriptor, and re-inserts everything into a fresh grid. The gap between the
two quantifies how badly evaluation noise fooled the optimizer.
"""

from dataclasses import dataclass

import numpy as np

from uqdbench import _backend
from uqdbench.archive import Elite, GridArchive, fmt17
from uqdbench.errors import ConfigurationError, UsageError
from uqdbench.rng import stream_keys
from uqdbench.tasks import evaluate_blocks

# Variance of a uniform descriptor component over [0, 1]: noise as wide as the
# whole descriptor space earns zero reproducibility credit.
SIGMA2_REF_DEFAULT = 1.0 / 12.0


@dataclass(frozen=True)
class CorrectedArchive:
    archive: GridArchive
    n_reeval: int


@dataclass
class MetricsRecord:
    evaluations_used: int
    illusory_qd_score: float
    illusory_coverage: float
    corrected_qd_score: float = None
    corrected_coverage: float = None
    loss_qd_score: float = None
    loss_coverage: float = None
    reproducibility_score: float = None


def illusory_scores(archive):
    """(QD-Score, coverage) of an archive from its believed fitness.

    Elites carry their estimated fitness in aux["est_fitness"]; for the
    reproducibility baseline the stored competition score is a variance, not
    a fitness, so the QD-Score must not sum it. Falls back to the stored
    fitness for archives without aux (e.g. loaded from CSV).
    """
    total = 0.0
    for cell in sorted(archive.cells):
        e = archive.cells[cell]
        total += e.aux.get("est_fitness", e.fitness) + archive.offset
    return total, archive.coverage()


def build_corrected(illusory, task, n_reeval, rng):
    """Reevaluate each illusory elite n_reeval times and rebuild the grid.

    Elites are re-inserted at their mean descriptor, competing on mean
    fitness. Reevaluations run on streams derived from rng (a family disjoint
    from the optimization streams) and do not count against any budget.
    """
    if n_reeval < 2:
        raise UsageError(f"n_reeval must be >= 2 to estimate variance, got {n_reeval}")
    corrected = GridArchive(resolution=illusory.resolution, offset=illusory.offset)
    items = illusory.sorted_items()
    if not items:
        return CorrectedArchive(corrected, n_reeval)

    genotypes = np.stack([e.genotype for _, e in items])
    m = len(items)
    sids = stream_keys((rng.stream_id,),
                       np.arange(m)[:, None], np.arange(n_reeval)[None, :])
    blocks = _backend.philox_many(rng.master_seed, sids.reshape(-1), 1)
    flat = np.repeat(genotypes, n_reeval, axis=0)
    fit, desc = evaluate_blocks(task, flat, blocks)
    fits = np.ascontiguousarray(fit.reshape(m, n_reeval))
    descs = desc.reshape(m, n_reeval, 2)
    mean_f, _ = _backend.seq_mean_var(fits)
    mean_dx, var_dx = _backend.seq_mean_var(np.ascontiguousarray(descs[:, :, 0]))
    mean_dy, var_dy = _backend.seq_mean_var(np.ascontiguousarray(descs[:, :, 1]))

    for k, (cell, src) in enumerate(items):
        desc_k = np.array([min(max(mean_dx[k], 0.0), 1.0),
                           min(max(mean_dy[k], 0.0), 1.0)])
        corrected.try_insert(Elite(
            genotype=src.genotype,
            fitness=float(mean_f[k]),
            descriptor=desc_k,
            n_samples=n_reeval,
            aux={"est_fitness": float(mean_f[k]),
                 "desc_var": np.array([var_dx[k], var_dy[k]]),
                 "source_cell": cell},
        ))
    return CorrectedArchive(corrected, n_reeval)


def loss_metrics(illusory, corrected):
    """Relative drop (%) from illusory to corrected QD-Score and coverage."""
    iq, ic = illusory_scores(illusory)
    cq, cc = illusory_scores(corrected.archive)

    def loss(i, c):
        return 0.0 if i == 0.0 else 100.0 * (i - c) / i

    return loss(iq, cq), loss(ic, cc)


def normalised_variance(per_dim_variances, sigma2_ref=SIGMA2_REF_DEFAULT):
    """Mean per-dimension descriptor variance scaled by sigma2_ref, in [0, 1]."""
    if sigma2_ref <= 0:
        raise ConfigurationError(f"sigma2_ref must be > 0, got {sigma2_ref}")
    v = np.asarray(per_dim_variances, dtype=np.float64)
    return min(float(v.mean()) / sigma2_ref, 1.0)


def reproducibility_score(corrected, sigma2_ref=SIGMA2_REF_DEFAULT):
    """Sum over the corrected archive of (1 - normalized descriptor variance)."""
    total = 0.0
    for _cell, e in corrected.archive.sorted_items():
        total += 1.0 - normalised_variance(e.aux["desc_var"], sigma2_ref)
    return total


def reproducibility_archive(corrected, sigma2_ref=SIGMA2_REF_DEFAULT):
    """Per-cell (1 - normalized variance), keyed by (row, col)."""
    return {cell: 1.0 - normalised_variance(e.aux["desc_var"], sigma2_ref)
            for cell, e in corrected.archive.sorted_items()}


def reproducibility_to_csv(repro_map, path):
    with open(path, "w") as f:
        f.write("cell_row,cell_col,reproducibility\n")
        for (i, j) in sorted(repro_map):
            f.write(f"{i},{j},{fmt17(repro_map[(i, j)])}\n")


def full_record(evaluations_used, illusory, corrected, sigma2_ref=SIGMA2_REF_DEFAULT):
    """MetricsRecord with both illusory and corrected sides filled in."""
    iq, ic = illusory_scores(illusory)
    cq, cc = illusory_scores(corrected.archive)
    lq, lc = loss_metrics(illusory, corrected)
    return MetricsRecord(
        evaluations_used=evaluations_used,
        illusory_qd_score=iq,
        illusory_coverage=ic,
        corrected_qd_score=cq,
        corrected_coverage=cc,
        loss_qd_score=lq,
        loss_coverage=lc,
        reproducibility_score=reproducibility_score(corrected, sigma2_ref),
    )
