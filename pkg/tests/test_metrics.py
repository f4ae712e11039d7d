"""Corrected archives, loss metrics, reproducibility scores."""

import numpy as np
import pytest

from uqdbench import metrics, solvers, tasks
from uqdbench.archive import Elite, GridArchive
from uqdbench.errors import ConfigurationError, UsageError
from uqdbench.metrics import (build_corrected, loss_metrics, normalised_variance,
                              reproducibility_archive, reproducibility_score)
from uqdbench.rng import RngStream
from uqdbench.solvers import Algo, SolverConfig


def run_small(task_name, algo=Algo.ME, budget=3000, seed=31):
    task = tasks.make_task(task_name)
    cfg = SolverConfig(algo=algo, n_samples=5, batch_size=16, init_batch=32,
                       eval_budget=budget, metric_period=50)
    return task, solvers.run(task, cfg, seed).archive


def test_noise_free_corrected_identical():
    task, illusory = run_small("noise-free")
    corr = build_corrected(illusory, task, 50, RngStream(1, 2))
    assert set(corr.archive.cells) == set(illusory.cells)
    for cell in illusory.cells:
        a, b = illusory.cells[cell], corr.archive.cells[cell]
        assert a.fitness == b.fitness
        assert np.array_equal(a.descriptor, b.descriptor)
        assert np.array_equal(a.genotype, b.genotype)
    lq, lc = loss_metrics(illusory, corr)
    assert lq == 0.0 and lc == 0.0
    assert reproducibility_score(corr) == len(corr.archive)


def test_corrected_fitness_clt_single_elite():
    task = tasks.make_task("gaussian-fitness")  # sigma 0.5
    g = np.random.default_rng(0).uniform(-1, 1, 8)
    from uqdbench.arm import descriptor, fitness
    clean = fitness(task.arm, g)
    illusory = GridArchive()
    illusory.try_insert(Elite(genotype=g, fitness=clean + 1.0,
                              descriptor=descriptor(task.arm, g)))
    corr = build_corrected(illusory, task, 10_000, RngStream(3, 4))
    (elite,) = corr.archive.cells.values()
    assert abs(elite.fitness - clean) < 3 * 0.5 / 100.0


def test_corrected_counts_bounded_by_illusory():
    task, illusory = run_small("large-gaussian-descriptor", budget=5000)
    corr = build_corrected(illusory, task, 20, RngStream(5, 6))
    assert len(corr.archive) <= len(illusory)
    for e in corr.archive.cells.values():
        assert "source_cell" in e.aux


def test_corrected_deterministic():
    task, illusory = run_small("small-gaussian-descriptor")
    a = build_corrected(illusory, task, 20, RngStream(7, 8))
    b = build_corrected(illusory, task, 20, RngStream(7, 8))
    assert set(a.archive.cells) == set(b.archive.cells)
    for cell in a.archive.cells:
        assert a.archive.cells[cell].fitness == b.archive.cells[cell].fitness


def test_corrected_requires_two_reevals():
    task, illusory = run_small("noise-free")
    with pytest.raises(UsageError):
        build_corrected(illusory, task, 1, RngStream(0, 0))


def test_corrected_empty_archive_ok():
    task = tasks.make_task("noise-free")
    corr = build_corrected(GridArchive(), task, 10, RngStream(0, 0))
    assert len(corr.archive) == 0
    assert reproducibility_archive(corr) == {}


def test_loss_arithmetic():
    a = GridArchive((10, 10), offset=0.0)
    a.try_insert(Elite(np.zeros(1), 100.0, np.array([0.05, 0.05])))
    b = GridArchive((10, 10), offset=0.0)
    b.try_insert(Elite(np.zeros(1), 80.0, np.array([0.05, 0.05])))
    lq, lc = loss_metrics(a, metrics.CorrectedArchive(b, 2))
    assert lq == pytest.approx(20.0)
    assert lc == 0.0
    # corrected above illusory gives a negative loss
    lq_neg, _ = loss_metrics(b, metrics.CorrectedArchive(a, 2))
    assert lq_neg == pytest.approx(-25.0)


def test_loss_zero_when_illusory_zero():
    empty = GridArchive()
    lq, lc = loss_metrics(empty, metrics.CorrectedArchive(GridArchive(), 2))
    assert lq == 0.0 and lc == 0.0


def test_normalised_variance():
    assert normalised_variance(np.zeros(2)) == 0.0
    ref = metrics.SIGMA2_REF_DEFAULT
    assert normalised_variance(np.array([ref / 2, ref / 2])) == pytest.approx(0.5)
    assert normalised_variance(np.array([ref, 3 * ref])) == 1.0
    with pytest.raises(ConfigurationError):
        normalised_variance(np.zeros(2), sigma2_ref=0.0)


def make_corrected_with_vars(variances):
    a = GridArchive((10, 10), offset=1.0)
    for k, v in enumerate(variances):
        a.try_insert(Elite(np.zeros(1), 0.0, np.array([(k + 0.5) / 10, 0.05]),
                           aux={"est_fitness": 0.0,
                                "desc_var": np.array([v, v])}))
    return metrics.CorrectedArchive(a, 2)


def test_reproducibility_score_cases():
    ref = metrics.SIGMA2_REF_DEFAULT
    assert reproducibility_score(make_corrected_with_vars([0.0] * 5)) == 5.0
    assert reproducibility_score(make_corrected_with_vars([ref, 2 * ref])) == 0.0
    got = reproducibility_score(make_corrected_with_vars([0.25 * ref, 0.75 * ref]))
    assert got == pytest.approx(1.0)


def test_reproducibility_archive_values():
    task, illusory = run_small("noise-free")
    corr = build_corrected(illusory, task, 10, RngStream(9, 9))
    repro = reproducibility_archive(corr)
    assert set(repro) == set(corr.archive.cells)
    assert all(v == 1.0 for v in repro.values())


def test_reproducibility_csv(tmp_path):
    task, illusory = run_small("noise-free", budget=2000)
    corr = build_corrected(illusory, task, 10, RngStream(9, 9))
    p = tmp_path / "repro.csv"
    metrics.reproducibility_to_csv(reproducibility_archive(corr), p)
    lines = p.read_text().splitlines()
    assert lines[0] == "cell_row,cell_col,reproducibility"
    assert len(lines) == 1 + len(corr.archive)


def test_full_record_fields():
    task, illusory = run_small("gaussian-fitness", budget=2000)
    corr = build_corrected(illusory, task, 20, RngStream(11, 12))
    rec = metrics.full_record(2000, illusory, corr)
    assert rec.evaluations_used == 2000
    assert 0.0 <= rec.illusory_coverage <= 1.0
    assert 0.0 <= rec.corrected_coverage <= 1.0
    assert rec.reproducibility_score <= len(corr.archive) + 1e-12
    # fitness noise only: descriptors are exact, so no coverage loss
    assert rec.loss_coverage == 0.0
