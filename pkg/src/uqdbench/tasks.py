"""The benchmark task catalog and the stochastic evaluation entry point.

Nine tasks: a noise-free reference, five performance-estimation tasks
(fitness or descriptor reading perturbed, non-zero fitness), two
reproducibility tasks (zero fitness, genotype-conditional descriptor noise)
and one realistic task (noise injected into a single joint angle before the
kinematics).
"""


from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from uqdbench import _backend, noise
from uqdbench.arm import ArmConfig, FitnessMode, descriptor_from_xy, validate_genotype
from uqdbench.errors import ConfigurationError, UsageError
from uqdbench.noise import NoiseKind
from uqdbench.rng import DOMAIN_ORACLE, DOMAIN_SAMPLE, fnv1a64, stream_key, stream_keys


class TaskId(Enum):
    NOISE_FREE = "noise-free"
    GAUSS_FIT = "gaussian-fitness"
    BIMODAL_FIT = "bimodal-fitness"
    SMALL_GAUSS_DESC = "small-gaussian-descriptor"
    LARGE_GAUSS_DESC = "large-gaussian-descriptor"
    BIMODAL_DESC = "bimodal-descriptor"
    TWO_SIGMA_DESC = "two-sigma-descriptor"
    CONTINUOUS_SIGMA_DESC = "continuous-sigma-descriptor"
    PHENO_J = "pheno-j"


class NoiseLocation(Enum):
    NONE = "none"
    FITNESS = "fitness"
    DESCRIPTOR = "descriptor"
    PHENOTYPE = "phenotype"


@dataclass(frozen=True)
class TaskSpec:
    task_id: TaskId
    arm: ArmConfig
    location: NoiseLocation
    dist: noise.NoiseDistribution
    noisy_joint: int = 0              # 1-based joint index, phenotype location only
    params: dict = field(default_factory=dict)

    @property
    def name(self):
        return self.task_id.value


@dataclass(frozen=True)
class Evaluation:
    """One stochastic observation of a genotype."""
    fitness: float
    descriptor: np.ndarray


@dataclass(frozen=True)
class ExpectedEvaluation:
    fitness: float
    descriptor: np.ndarray
    descriptor_variance: np.ndarray


def _positive(params, key, default):
    v = params.pop(key, default)
    if v <= 0:
        raise ConfigurationError(f"{key} must be > 0, got {v}")
    return float(v)


_OVERRIDE_KEYS = {
    TaskId.NOISE_FREE: set(),
    TaskId.GAUSS_FIT: {"sigma"},
    TaskId.BIMODAL_FIT: {"alpha", "sigma1", "sigma2"},
    TaskId.SMALL_GAUSS_DESC: {"sigma"},
    TaskId.LARGE_GAUSS_DESC: {"sigma"},
    TaskId.BIMODAL_DESC: {"alpha", "sigma1", "sigma2"},
    TaskId.TWO_SIGMA_DESC: {"sigma1", "sigma2"},
    TaskId.CONTINUOUS_SIGMA_DESC: {"eta"},
    TaskId.PHENO_J: {"sigma", "joint"},
}
_ARM_KEYS = {"n_joints", "angle_bounds"}

# Human-readable parameter constraints, also shown by the CLI task catalog.
TASK_CONSTRAINTS = {
    TaskId.NOISE_FREE: "no parameters",
    TaskId.GAUSS_FIT: "sigma > 0",
    TaskId.BIMODAL_FIT: "alpha in (0, 1); sigma1, sigma2 > 0",
    TaskId.SMALL_GAUSS_DESC: "sigma in (0, 0.02)",
    TaskId.LARGE_GAUSS_DESC: "sigma > 0.1",
    TaskId.BIMODAL_DESC: "alpha in (0, 1); sigma1, sigma2 > 0",
    TaskId.TWO_SIGMA_DESC: "sigma2 >= 10 * sigma1 > 0",
    TaskId.CONTINUOUS_SIGMA_DESC: "eta > 0",
    TaskId.PHENO_J: "sigma > 0; joint in [1, n_joints]",
}


def task_ids():
    return [t.value for t in TaskId]


def resolve_task_id(name):
    for t in TaskId:
        if t.value == name:
            return t
    raise ConfigurationError(f"unknown task {name!r}; known: {', '.join(task_ids())}")


def make_task(task_id, **overrides):
    """Resolve a task id plus overrides into a fully validated TaskSpec."""
    if isinstance(task_id, str):
        task_id = resolve_task_id(task_id)
    params = dict(overrides)

    arm_kwargs = {}
    for k in _ARM_KEYS:
        if k in params:
            arm_kwargs[k] = params.pop(k)

    unknown = set(params) - _OVERRIDE_KEYS[task_id]
    if unknown:
        raise ConfigurationError(
            f"{task_id.value} does not accept parameter(s) {sorted(unknown)}; "
            f"allowed: {sorted(_OVERRIDE_KEYS[task_id]) or 'none'}")

    if task_id is TaskId.NOISE_FREE:
        arm = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.NONE, noise.no_noise())

    if task_id is TaskId.GAUSS_FIT:
        sigma = _positive(params, "sigma", 0.5)
        arm = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.FITNESS,
                        noise.gaussian(0.0, sigma), params={"sigma": sigma})

    if task_id is TaskId.BIMODAL_FIT:
        alpha = float(params.pop("alpha", 0.95))
        if not 0.0 < alpha < 1.0:
            raise ConfigurationError(
                f"{task_id.value} requires alpha in (0, 1), got {alpha}")
        s1 = _positive(params, "sigma1", 0.05)
        s2 = _positive(params, "sigma2", 0.05)
        arm = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.FITNESS,
                        noise.bimodal(alpha, 0.0, s1, -1.0, s2),
                        params={"alpha": alpha, "sigma1": s1, "sigma2": s2})

    if task_id is TaskId.SMALL_GAUSS_DESC:
        sigma = float(params.pop("sigma", 0.01))
        if not 0.0 < sigma < 0.02:
            raise ConfigurationError(
                f"{task_id.value} requires sigma in (0, 0.02), got {sigma}")
        arm = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.DESCRIPTOR,
                        noise.gaussian((0.0, 0.0), sigma), params={"sigma": sigma})

    if task_id is TaskId.LARGE_GAUSS_DESC:
        sigma = float(params.pop("sigma", 0.15))
        if not sigma > 0.1:
            raise ConfigurationError(
                f"{task_id.value} requires sigma > 0.1, got {sigma}")
        arm = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.DESCRIPTOR,
                        noise.gaussian((0.0, 0.0), sigma), params={"sigma": sigma})

    if task_id is TaskId.BIMODAL_DESC:
        alpha = float(params.pop("alpha", 0.95))
        if not 0.0 < alpha < 1.0:
            raise ConfigurationError(
                f"{task_id.value} requires alpha in (0, 1), got {alpha}")
        s1 = _positive(params, "sigma1", 0.01)
        s2 = _positive(params, "sigma2", 0.01)
        arm = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.DESCRIPTOR,
                        noise.bimodal(alpha, (0.0, 0.0), s1, (1.0, 1.0), s2),
                        params={"alpha": alpha, "sigma1": s1, "sigma2": s2})

    if task_id is TaskId.TWO_SIGMA_DESC:
        s1 = _positive(params, "sigma1", 0.001)
        s2 = _positive(params, "sigma2", 0.05)
        arm = ArmConfig(fitness_mode=FitnessMode.ZERO, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.DESCRIPTOR,
                        noise.two_sigma(s1, s2), params={"sigma1": s1, "sigma2": s2})

    if task_id is TaskId.CONTINUOUS_SIGMA_DESC:
        eta = _positive(params, "eta", 0.02)
        arm = ArmConfig(fitness_mode=FitnessMode.ZERO, **arm_kwargs)
        return TaskSpec(task_id, arm, NoiseLocation.DESCRIPTOR,
                        noise.continuous_sigma(eta), params={"eta": eta})

    if task_id is TaskId.PHENO_J:
        sigma = _positive(params, "sigma", 0.2)
        arm = ArmConfig(fitness_mode=FitnessMode.ZERO, **arm_kwargs)
        joint = int(params.pop("joint", 6))
        if not 1 <= joint <= arm.n_joints:
            raise ConfigurationError(
                f"{task_id.value} requires joint in [1, {arm.n_joints}], got {joint}")
        return TaskSpec(task_id, arm, NoiseLocation.PHENOTYPE,
                        noise.gaussian(0.0, sigma), noisy_joint=joint,
                        params={"sigma": sigma, "joint": joint})

    raise ConfigurationError(f"unhandled task id {task_id}")


def evaluate_blocks(task, genotypes, blocks):
    """Evaluate (B, N) genotypes, one Philox block per row.

    Returns (fitness (B,), descriptors (B, 2)). This is the single evaluation
    path: the scalar `evaluate` and all solvers go through it.
    """
    genotypes = np.ascontiguousarray(genotypes, dtype=np.float64)
    arm = task.arm
    if genotypes.shape[1] != arm.n_joints:
        raise ConfigurationError(
            f"genotypes have {genotypes.shape[1]} joints, task expects {arm.n_joints}")

    if task.location is NoiseLocation.PHENOTYPE:
        eps = task.dist.sigma * _backend.gauss_from_unit(
            _backend.u64_to_unit(blocks[:, 0]))
        perturbed = genotypes.copy()
        perturbed[:, task.noisy_joint - 1] += eps  # not clipped to bounds
        xy = _backend.fk_xy(arm.lengths, perturbed)
        desc = descriptor_from_xy(xy)
        if arm.fitness_mode is FitnessMode.ZERO:
            fit = np.zeros(len(genotypes))
        else:
            fit = _backend.neg_joint_variance(genotypes)
        return fit, desc

    xy = _backend.fk_xy(arm.lengths, genotypes)
    desc = descriptor_from_xy(xy)
    if arm.fitness_mode is FitnessMode.ZERO:
        fit = np.zeros(len(genotypes))
    else:
        fit = _backend.neg_joint_variance(genotypes)

    if task.location is NoiseLocation.NONE:
        return fit, desc
    if task.location is NoiseLocation.FITNESS:
        eps = noise.sample_scalar_from_blocks(task.dist, blocks)
        return fit + eps, desc
    # descriptor noise, added in normalized space then clamped
    if task.dist.kind in (NoiseKind.CONDITIONAL_TWO_SIGMA, NoiseKind.CONDITIONAL_CONTINUOUS):
        eps = noise.sample_conditional_from_blocks(task.dist, genotypes, blocks)
    else:
        eps = noise.sample_vector2_from_blocks(task.dist, blocks)
    return fit, np.clip(desc + eps, 0.0, 1.0)


def evaluate(task, genotype, rng):
    """One stochastic evaluation; consumes one block (4 words) of the stream."""
    g = validate_genotype(task.arm, genotype)
    blocks = rng.u64(4)
    fit, desc = evaluate_blocks(task, g[None, :], blocks[None, :])
    return Evaluation(float(fit[0]), desc[0])


def evaluate_samples(task, genotype, n, rng):
    """n independent evaluations, each on its own stream derived from rng."""
    if n < 1:
        raise UsageError(f"sample count must be >= 1, got {n}")
    g = validate_genotype(task.arm, genotype)
    sids = stream_keys((rng.stream_id, DOMAIN_SAMPLE), np.arange(n))
    blocks = _backend.philox_many(rng.master_seed, sids, 1)
    fit, desc = evaluate_blocks(task, np.broadcast_to(g, (n, len(g))), blocks)
    return [Evaluation(float(fit[i]), desc[i]) for i in range(n)]


def _clean_evaluation(task, g):
    xy = _backend.fk_xy(task.arm.lengths, g[None, :])
    desc = descriptor_from_xy(xy)[0]
    if task.arm.fitness_mode is FitnessMode.ZERO:
        fit = 0.0
    else:
        fit = float(_backend.neg_joint_variance(g[None, :])[0])
    return fit, desc


def expected_evaluation(task, genotype, n_oracle=100_000):
    """Expected fitness/descriptor and per-dim descriptor variance.

    Additive fitness/descriptor noise uses the closed-form distribution
    moments (descriptor clamping ignored). Conditional and phenotype noise
    fall back to Monte-Carlo with n_oracle draws on a reserved stream.
    """
    if n_oracle < 1:
        raise UsageError(f"n_oracle must be >= 1, got {n_oracle}")
    g = validate_genotype(task.arm, genotype)
    fit, desc = _clean_evaluation(task, g)

    if task.location is NoiseLocation.NONE:
        return ExpectedEvaluation(fit, desc, np.zeros(2))

    if task.location is NoiseLocation.FITNESS:
        mean, _var = noise.analytic_expectation(task.dist)
        return ExpectedEvaluation(fit + float(mean[0]), desc, np.zeros(2))

    if task.location is NoiseLocation.DESCRIPTOR and task.dist.kind in (
            NoiseKind.GAUSSIAN, NoiseKind.BIMODAL):
        mean, var = noise.analytic_expectation(task.dist)
        return ExpectedEvaluation(fit, desc + mean, var.copy())

    # conditional descriptor noise / phenotype noise: Monte-Carlo
    sid = stream_key(DOMAIN_ORACLE, fnv1a64(task.name))
    sids = stream_keys((sid,), np.arange(n_oracle))
    blocks = _backend.philox_many(0, sids, 1)
    fits, descs = evaluate_blocks(task, np.broadcast_to(g, (n_oracle, len(g))), blocks)
    dmean, dvar = _backend.seq_mean_var(descs.T.copy())
    fmean, _ = _backend.seq_mean_var(fits[None, :])
    return ExpectedEvaluation(float(fmean[0]), dmean, dvar)
