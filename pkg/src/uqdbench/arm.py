"""Noise-free redundant planar arm: forward kinematics, descriptor, fitness.

The arm is a chain of N links with cumulative joint angles; total reach is
normalized to 1 so the end-effector lives in the unit disc. The descriptor is
the end-effector position affinely mapped from [-1, 1]^2 to [0, 1]^2.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from uqdbench import _backend
from uqdbench.errors import ConfigurationError


class FitnessMode(Enum):
    ZERO = "zero"
    NEG_JOINT_VARIANCE = "neg-joint-variance"


@dataclass(frozen=True)
class ArmConfig:
    """Arm geometry plus the fitness flavor used by the task."""

    n_joints: int = 8
    link_lengths: tuple = ()
    angle_bounds: tuple = (-math.pi, math.pi)
    fitness_mode: FitnessMode = FitnessMode.NEG_JOINT_VARIANCE

    def __post_init__(self):
        if self.n_joints < 2:
            raise ConfigurationError(f"n_joints must be >= 2, got {self.n_joints}")
        if not self.link_lengths:
            object.__setattr__(self, "link_lengths",
                               tuple([1.0 / self.n_joints] * self.n_joints))
        if len(self.link_lengths) != self.n_joints:
            raise ConfigurationError(
                f"expected {self.n_joints} link lengths, got {len(self.link_lengths)}")
        if any(l <= 0 for l in self.link_lengths):
            raise ConfigurationError("link lengths must be positive")
        if abs(sum(self.link_lengths) - 1.0) > 1e-9:
            raise ConfigurationError(
                f"link lengths must sum to 1, got {sum(self.link_lengths)}")
        lo, hi = self.angle_bounds
        if not lo < hi:
            raise ConfigurationError(f"angle bounds must satisfy lo < hi, got {lo}, {hi}")

    @property
    def lengths(self):
        return np.asarray(self.link_lengths, dtype=np.float64)


def validate_genotype(cfg, genotype):
    """Check length and bounds; returns the genotype as a float64 array."""
    g = np.asarray(genotype, dtype=np.float64)
    if g.shape != (cfg.n_joints,):
        raise ConfigurationError(
            f"genotype has shape {g.shape}, expected ({cfg.n_joints},)")
    lo, hi = cfg.angle_bounds
    if np.any(g < lo) or np.any(g > hi):
        raise ConfigurationError("genotype angle outside bounds "
                                 f"[{lo}, {hi}]: {g}")
    return g


def forward_kinematics(cfg, genotype):
    """Raw end-effector (x, y) in the unit disc."""
    g = validate_genotype(cfg, genotype)
    return _backend.fk_xy(cfg.lengths, g[None, :])[0]


def forward_kinematics_batch(cfg, genotypes):
    """Raw end-effector positions for (B, N) angles, no bounds check."""
    return _backend.fk_xy(cfg.lengths, genotypes)


def descriptor(cfg, genotype):
    """Normalized end-effector position in [0, 1]^2."""
    xy = forward_kinematics(cfg, genotype)
    return np.clip((xy + 1.0) * 0.5, 0.0, 1.0)


def descriptor_from_xy(xy):
    """Affine map of raw positions (..., 2) from [-1, 1]^2 to [0, 1]^2."""
    return np.clip((xy + 1.0) * 0.5, 0.0, 1.0)


def fitness(cfg, genotype):
    """0 in ZERO mode; -(population variance of the angles) otherwise."""
    g = validate_genotype(cfg, genotype)
    if cfg.fitness_mode is FitnessMode.ZERO:
        return 0.0
    return float(_backend.neg_joint_variance(g[None, :])[0])


def fitness_batch(cfg, genotypes):
    if cfg.fitness_mode is FitnessMode.ZERO:
        return np.zeros(len(genotypes))
    return _backend.neg_joint_variance(genotypes)


def joint_angle_variance(genotype):
    """Population variance of the joint angles (the task's V(theta))."""
    g = np.asarray(genotype, dtype=np.float64)
    return float(-_backend.neg_joint_variance(g[None, :])[0])
