"""Noise distribution families used by the benchmark tasks.

Scalar and 2-D samplers for Gaussian and bimodal (two-mode Gaussian mixture)
noise, plus the two genotype-conditional descriptor-noise families: one that
switches between a small and a large sigma on the sign of the product of
joint angles, and one whose sigma is proportional to the joint-angle variance.

Every evaluation owns one Philox block (4 words); the word layout per
distribution is fixed here and shared by the scalar and batch paths:

  GAUSSIAN scalar          w0 -> z
  BIMODAL scalar           w0 -> mode select, w1 -> z
  GAUSSIAN 2-D             w0, w1 -> z0, z1
  BIMODAL 2-D              w0 -> mode select, w1, w2 -> z0, z1
  conditional 2-D          w0, w1 -> z0, z1
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from uqdbench import _backend
from uqdbench.errors import ConfigurationError, UsageError


class NoiseKind(Enum):
    NONE = "none"
    GAUSSIAN = "gaussian"
    BIMODAL = "bimodal"
    CONDITIONAL_TWO_SIGMA = "conditional-two-sigma"
    CONDITIONAL_CONTINUOUS = "conditional-continuous"


@dataclass(frozen=True)
class NoiseDistribution:
    kind: NoiseKind
    mean: tuple = (0.0,)          # mode-1 mean; length 1 (scalar) or 2
    sigma: float = 0.0            # gaussian sigma / mixture sigma_1 / two-sigma sigma_1
    alpha: float = 0.0            # mixture weight of mode 1
    mean2: tuple = (0.0,)         # mode-2 mean
    sigma2: float = 0.0           # mixture sigma_2 / two-sigma sigma_2
    eta: float = 0.0              # continuous-variance gain

    def __post_init__(self):
        k = self.kind
        if k is NoiseKind.GAUSSIAN:
            if self.sigma <= 0:
                raise ConfigurationError(f"gaussian noise requires sigma > 0, got {self.sigma}")
        elif k is NoiseKind.BIMODAL:
            # alpha = 1 admitted as the degenerate single-mode case; the task
            # catalog enforces the strict (0, 1) range separately
            if not 0.0 < self.alpha <= 1.0:
                raise ConfigurationError(f"bimodal noise requires alpha in (0, 1], got {self.alpha}")
            if self.sigma <= 0 or self.sigma2 <= 0:
                raise ConfigurationError("bimodal noise requires sigma_1, sigma_2 > 0, "
                                         f"got {self.sigma}, {self.sigma2}")
            if len(self.mean) != len(self.mean2):
                raise ConfigurationError("bimodal modes must have equal dimension")
        elif k is NoiseKind.CONDITIONAL_TWO_SIGMA:
            if self.sigma <= 0:
                raise ConfigurationError(f"two-sigma noise requires sigma_1 > 0, got {self.sigma}")
            if self.sigma2 < 10.0 * self.sigma:
                raise ConfigurationError(
                    "two-sigma noise requires sigma_2 >> sigma_1 "
                    f"(validated as sigma_2 >= 10*sigma_1), got {self.sigma2} < {10*self.sigma}")
        elif k is NoiseKind.CONDITIONAL_CONTINUOUS:
            if self.eta <= 0:
                raise ConfigurationError(f"continuous-variance noise requires eta > 0, got {self.eta}")

    @property
    def dim(self):
        return len(self.mean)


def gaussian(mean, sigma):
    m = (mean,) if np.isscalar(mean) else tuple(mean)
    return NoiseDistribution(NoiseKind.GAUSSIAN, mean=m, sigma=sigma)


def bimodal(alpha, mean1, sigma1, mean2, sigma2):
    m1 = (mean1,) if np.isscalar(mean1) else tuple(mean1)
    m2 = (mean2,) if np.isscalar(mean2) else tuple(mean2)
    return NoiseDistribution(NoiseKind.BIMODAL, mean=m1, sigma=sigma1,
                             alpha=alpha, mean2=m2, sigma2=sigma2)


def two_sigma(sigma1, sigma2):
    return NoiseDistribution(NoiseKind.CONDITIONAL_TWO_SIGMA, mean=(0.0, 0.0),
                             sigma=sigma1, sigma2=sigma2)


def continuous_sigma(eta):
    return NoiseDistribution(NoiseKind.CONDITIONAL_CONTINUOUS, mean=(0.0, 0.0), eta=eta)


def no_noise():
    return NoiseDistribution(NoiseKind.NONE)


def _normals(words):
    return _backend.gauss_from_unit(_backend.u64_to_unit(words))


def sample_scalar_from_blocks(dist, blocks):
    """One scalar draw per row of blocks (E, >=2)."""
    if dist.kind is NoiseKind.GAUSSIAN:
        z = _normals(blocks[:, 0])
        return dist.mean[0] + dist.sigma * z
    if dist.kind is NoiseKind.BIMODAL:
        pick1 = _backend.u64_to_unit(blocks[:, 0]) < dist.alpha
        z = _normals(blocks[:, 1])
        mean = np.where(pick1, dist.mean[0], dist.mean2[0])
        sig = np.where(pick1, dist.sigma, dist.sigma2)
        return mean + sig * z
    raise UsageError(f"scalar sampling undefined for {dist.kind.value} noise"
                     " (conditional noise needs a genotype; see sample_conditional)")


def sample_vector2_from_blocks(dist, blocks):
    """One 2-D draw per row of blocks (E, >=3); isotropic per mode."""
    if dist.kind is NoiseKind.GAUSSIAN:
        z0 = _normals(blocks[:, 0])
        z1 = _normals(blocks[:, 1])
        out = np.empty((len(z0), 2))
        out[:, 0] = dist.mean[0] + dist.sigma * z0
        out[:, 1] = dist.mean[1] + dist.sigma * z1
        return out
    if dist.kind is NoiseKind.BIMODAL:
        pick1 = _backend.u64_to_unit(blocks[:, 0]) < dist.alpha
        z0 = _normals(blocks[:, 1])
        z1 = _normals(blocks[:, 2])
        sig = np.where(pick1, dist.sigma, dist.sigma2)
        out = np.empty((len(z0), 2))
        out[:, 0] = np.where(pick1, dist.mean[0], dist.mean2[0]) + sig * z0
        out[:, 1] = np.where(pick1, dist.mean[1], dist.mean2[1]) + sig * z1
        return out
    raise UsageError(f"vector sampling undefined for {dist.kind.value} noise")


def product_sign_nonneg(genotypes):
    """sign(prod_j theta_j) >= 0 per row, via parity of negative entries.

    Counting avoids the float underflow a literal product can hit; any zero
    angle makes the product 0, which counts as the non-negative branch.
    """
    g = np.asarray(genotypes, dtype=np.float64)
    neg_odd = (g < 0).sum(axis=1) % 2 == 1
    has_zero = (g == 0).any(axis=1)
    return ~neg_odd | has_zero


def conditional_sigmas(dist, genotypes):
    """Per-genotype noise std for the conditional families."""
    g = np.asarray(genotypes, dtype=np.float64)
    if dist.kind is NoiseKind.CONDITIONAL_TWO_SIGMA:
        return np.where(product_sign_nonneg(g), dist.sigma, dist.sigma2)
    if dist.kind is NoiseKind.CONDITIONAL_CONTINUOUS:
        return dist.eta * (-_backend.neg_joint_variance(g))
    raise UsageError(f"{dist.kind.value} noise is not conditional")


def sample_conditional_from_blocks(dist, genotypes, blocks):
    sig = conditional_sigmas(dist, genotypes)
    z0 = _normals(blocks[:, 0])
    z1 = _normals(blocks[:, 1])
    out = np.empty((len(sig), 2))
    out[:, 0] = sig * z0
    out[:, 1] = sig * z1
    return out


def sample_scalar(dist, rng):
    """One scalar draw from the stream (GAUSSIAN: 1 word, BIMODAL: 2 words)."""
    if dist.kind is NoiseKind.GAUSSIAN:
        return float(dist.mean[0] + dist.sigma * rng.normals(1)[0])
    if dist.kind is NoiseKind.BIMODAL:
        words = rng.u64(2)
        return float(sample_scalar_from_blocks(dist, words[None, :])[0])
    raise UsageError(f"scalar sampling undefined for {dist.kind.value} noise"
                     " (conditional noise needs a genotype; see sample_conditional)")


def sample_vector2(dist, rng):
    """One 2-D draw from the stream (GAUSSIAN: 2 words, BIMODAL: 3 words)."""
    if dist.kind is NoiseKind.GAUSSIAN:
        words = rng.u64(2)
        return sample_vector2_from_blocks(dist, words[None, :])[0]
    if dist.kind is NoiseKind.BIMODAL:
        words = rng.u64(3)
        return sample_vector2_from_blocks(dist, words[None, :])[0]
    raise UsageError(f"vector sampling undefined for {dist.kind.value} noise")


def sample_conditional(dist, genotype, rng):
    """One 2-D conditional draw; consumes 2 words."""
    if dist.kind not in (NoiseKind.CONDITIONAL_TWO_SIGMA,
                         NoiseKind.CONDITIONAL_CONTINUOUS):
        raise UsageError(f"{dist.kind.value} noise is not conditional")
    g = np.asarray(genotype, dtype=np.float64)
    words = rng.u64(2)
    return sample_conditional_from_blocks(dist, g[None, :], words[None, :])[0]


def analytic_expectation(dist):
    """(mean, per-component variance) where a closed form exists, else None.

    Means and variances are returned as arrays of the distribution's
    dimension. Conditional families depend on the genotype, so no closed form
    is available here.
    """
    if dist.kind is NoiseKind.NONE:
        return np.zeros(1), np.zeros(1)
    if dist.kind is NoiseKind.GAUSSIAN:
        m = np.asarray(dist.mean, dtype=np.float64)
        return m, np.full_like(m, dist.sigma ** 2)
    if dist.kind is NoiseKind.BIMODAL:
        a = dist.alpha
        m1 = np.asarray(dist.mean, dtype=np.float64)
        m2 = np.asarray(dist.mean2, dtype=np.float64)
        mean = a * m1 + (1.0 - a) * m2
        var = (a * dist.sigma ** 2 + (1.0 - a) * dist.sigma2 ** 2
               + a * (1.0 - a) * (m1 - m2) ** 2)
        return mean, var
    return None
