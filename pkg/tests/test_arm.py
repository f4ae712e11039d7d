"""Arm kinematics, descriptor mapping, fitness modes."""

import math

import numpy as np
import pytest

from uqdbench.arm import (ArmConfig, FitnessMode, descriptor, descriptor_from_xy,
                          fitness, forward_kinematics, joint_angle_variance)
from uqdbench.errors import ConfigurationError


def two_link():
    return ArmConfig(n_joints=2, link_lengths=(0.5, 0.5))


def test_fully_extended_along_x():
    xy = forward_kinematics(two_link(), [0.0, 0.0])
    assert np.allclose(xy, [1.0, 0.0], atol=1e-15)


def test_two_link_analytic():
    xy = forward_kinematics(two_link(), [math.pi / 2, -math.pi / 2])
    assert np.allclose(xy, [0.5, 0.5], atol=1e-15)


def test_fk_matches_independent_oracle():
    # cumulative-angle summation written independently of the kernel
    cfg = ArmConfig()
    rng = np.random.default_rng(2024)
    for _ in range(200):
        g = rng.uniform(-math.pi, math.pi, 8)
        phi, x, y = 0.0, 0.0, 0.0
        for j in range(8):
            phi += g[j]
            x += 0.125 * math.cos(phi)
            y += 0.125 * math.sin(phi)
        got = forward_kinematics(cfg, g)
        assert abs(got[0] - x) < 1e-12 and abs(got[1] - y) < 1e-12


def test_fk_within_unit_disc():
    cfg = ArmConfig()
    rng = np.random.default_rng(7)
    g = rng.uniform(-math.pi, math.pi, (20_000, 8))
    from uqdbench.arm import forward_kinematics_batch
    xy = forward_kinematics_batch(cfg, g)
    assert np.all(np.hypot(xy[:, 0], xy[:, 1]) <= 1.0 + 1e-12)


def test_fk_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        forward_kinematics(two_link(), [0.0, 0.0, 0.0])


def test_fk_bounds_violation():
    with pytest.raises(ConfigurationError):
        forward_kinematics(two_link(), [4.0, 0.0])


def test_descriptor_affine_map():
    assert np.allclose(descriptor_from_xy(np.array([1.0, 0.0])), [1.0, 0.5])
    assert np.allclose(descriptor_from_xy(np.array([0.0, 0.0])), [0.5, 0.5])
    assert np.allclose(descriptor_from_xy(np.array([-1.0, -1.0])), [0.0, 0.0])


def test_descriptor_deterministic():
    cfg = ArmConfig()
    g = np.random.default_rng(3).uniform(-1, 1, 8)
    d1, d2 = descriptor(cfg, g), descriptor(cfg, g)
    assert np.array_equal(d1, d2)


def test_fitness_zero_mode():
    cfg = ArmConfig(fitness_mode=FitnessMode.ZERO)
    assert fitness(cfg, np.full(8, 0.3)) == 0.0
    assert fitness(cfg, np.random.default_rng(1).uniform(-1, 1, 8)) == 0.0


def test_fitness_equal_angles_is_zero():
    cfg = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE)
    for a in (-2.0, 0.0, 1.234, math.pi):
        g = np.full(8, min(a, math.pi))
        assert fitness(cfg, g) == 0.0


def test_fitness_hand_computed():
    cfg4 = ArmConfig(n_joints=4, fitness_mode=FitnessMode.NEG_JOINT_VARIANCE)
    assert abs(fitness(cfg4, [1.0, 1.0, -1.0, -1.0]) - (-1.0)) < 1e-15
    cfg2 = ArmConfig(n_joints=2, fitness_mode=FitnessMode.NEG_JOINT_VARIANCE)
    assert abs(fitness(cfg2, [math.pi, -math.pi]) - (-math.pi ** 2)) < 1e-12


def test_fitness_bounds():
    cfg = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE)
    rng = np.random.default_rng(4)
    for _ in range(200):
        f = fitness(cfg, rng.uniform(-math.pi, math.pi, 8))
        assert -math.pi ** 2 <= f <= 0.0


def test_fitness_permutation_invariant():
    cfg = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE)
    rng = np.random.default_rng(5)
    g = rng.uniform(-math.pi, math.pi, 8)
    f = fitness(cfg, g)
    for _ in range(10):
        assert fitness(cfg, rng.permutation(g)) == pytest.approx(f, abs=1e-13)


def test_fitness_zero_iff_equal():
    cfg = ArmConfig(fitness_mode=FitnessMode.NEG_JOINT_VARIANCE)
    g = np.full(8, 0.7)
    g[3] += 1e-5
    assert fitness(cfg, g) < -1e-12
    assert joint_angle_variance(np.full(8, 0.7)) == 0.0


def test_config_validation():
    with pytest.raises(ConfigurationError):
        ArmConfig(n_joints=1)
    with pytest.raises(ConfigurationError):
        ArmConfig(n_joints=3, link_lengths=(0.5, 0.5))
    with pytest.raises(ConfigurationError):
        ArmConfig(n_joints=2, link_lengths=(0.7, 0.5))
    with pytest.raises(ConfigurationError):
        ArmConfig(angle_bounds=(1.0, -1.0))


def test_default_links_sum_to_one():
    cfg = ArmConfig(n_joints=8)
    assert cfg.link_lengths == tuple([0.125] * 8)
