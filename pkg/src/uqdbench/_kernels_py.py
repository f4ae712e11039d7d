"""Pure-numpy implementations of the hot kernels.

These mirror `_kernels.pyx` operation for operation: every floating-point
result is produced by the same sequence of IEEE-754 double operations in both
backends, so the two are bit-identical and either may be selected at import.

Kernels:
  * Philox4x64-10 counter-based random bits (key = (master_seed, stream_id))
  * uint64 -> uniform double in (0, 1)
  * a fully specified inverse-CDF Gaussian transform (rational approximation
    with a self-contained log, so no libm/SIMD divergence can creep in)
  * planar-chain forward kinematics on batches of joint angles
  * order-fixed mean/variance aggregation (first-sample centred, so a set of
    identical samples aggregates to exactly that sample)
"""

import numpy as np

_M32 = 0xFFFFFFFF

# Philox4x64 round multipliers and key (Weyl) increments.
PHILOX_M0 = 0xD2E7470EE14C6C93
PHILOX_M1 = 0xCA5A826395121157
PHILOX_W0 = 0x9E3779B97F4A7C15
PHILOX_W1 = 0xBB67AE8584CAA73B

# 52 high bits only: (k + 0.5) is exact for k < 2**52, so the unit uniform is
# strictly inside (0, 1) with no rounding at either end.
_U64_TO_UNIT = 2.0 ** -52


def _mulhi(a, b):
    # High 64 bits of a 64x64 product via 32-bit limbs; a is a python int.
    a_lo = a & _M32
    a_hi = a >> 32
    b_lo = b & _M32
    b_hi = b >> np.uint64(32)
    t = a_lo * b_lo
    t = (a_hi * b_lo) + (t >> np.uint64(32))
    w1 = t >> np.uint64(32)
    t = (a_lo * b_hi) + (t & _M32)
    return (a_hi * b_hi) + w1 + (t >> np.uint64(32))


def _philox_rounds(c0, c1, c2, c3, key0, key1):
    # 10 rounds; keys are bumped between rounds (9 bumps). key1 may be an array.
    k0 = key0 & 0xFFFFFFFFFFFFFFFF
    k1 = key1
    for r in range(10):
        hi0 = _mulhi(PHILOX_M0, c0)
        lo0 = np.uint64(PHILOX_M0) * c0
        hi1 = _mulhi(PHILOX_M1, c2)
        lo1 = np.uint64(PHILOX_M1) * c2
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        if r < 9:
            k0 = (k0 + PHILOX_W0) & 0xFFFFFFFFFFFFFFFF
            k1 = k1 + np.uint64(PHILOX_W1)
    return c0, c1, c2, c3


def philox_blocks(key0, key1, start_block, n_blocks):
    """Blocks [start, start+n) of stream (key0, key1), as (n_blocks*4,) uint64."""
    c0 = np.arange(start_block, start_block + n_blocks, dtype=np.uint64)
    zero = np.zeros(n_blocks, dtype=np.uint64)
    k1 = np.full(n_blocks, key1 & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
    o0, o1, o2, o3 = _philox_rounds(c0, zero, zero, zero, key0, k1)
    out = np.empty((n_blocks, 4), dtype=np.uint64)
    out[:, 0] = o0
    out[:, 1] = o1
    out[:, 2] = o2
    out[:, 3] = o3
    return out.reshape(-1)

def philox_many(key0, key1s, n_blocks):
    """First n_blocks blocks of many streams: (E,) ids -> (E, 4*n_blocks) uint64."""
    key1s = np.ascontiguousarray(key1s, dtype=np.uint64)
    e = key1s.shape[0]
    out = np.empty((e, 4 * n_blocks), dtype=np.uint64)
    zero = np.zeros(e, dtype=np.uint64)
    for b in range(n_blocks):
        c0 = np.full(e, b, dtype=np.uint64)
        o0, o1, o2, o3 = _philox_rounds(c0, zero, zero, zero, key0, key1s)
        out[:, 4 * b + 0] = o0
        out[:, 4 * b + 1] = o1
        out[:, 4 * b + 2] = o2
        out[:, 4 * b + 3] = o3
    return out


def u64_to_unit(u):
    """Map uint64 words to doubles in the open interval (0, 1)."""
    u = np.ascontiguousarray(u, dtype=np.uint64)
    return ((u >> np.uint64(12)).astype(np.float64) + 0.5) * _U64_TO_UNIT


# ln(2) split for the self-contained log (fdlibm constants).
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_SQRT_HALF = 0.70710678118654752440

# atanh series 1/(2k+1), k = 12 .. 0 (Horner order, highest first).
_LOG_COEFFS = (
    1.0 / 25.0, 1.0 / 23.0, 1.0 / 21.0, 1.0 / 19.0, 1.0 / 17.0,
    1.0 / 15.0, 1.0 / 13.0, 1.0 / 11.0, 1.0 / 9.0, 1.0 / 7.0,
    1.0 / 5.0, 1.0 / 3.0, 1.0,
)


def det_log(x):
    """Natural log on (0, 1], from +,-,*,/ and frexp only (backend-identical)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    m, e = np.frexp(x)
    low = m < _SQRT_HALF
    m = np.where(low, m * 2.0, m)
    e = (e - low).astype(np.float64)
    s = (m - 1.0) / (m + 1.0)
    z = s * s
    p = np.full_like(z, _LOG_COEFFS[0])
    for c in _LOG_COEFFS[1:]:
        p = p * z + c
    ln_m = 2.0 * (s * p)
    return e * _LN2_HI + (e * _LN2_LO + ln_m)


# Rational approximations for the inverse normal CDF (absolute error ~1e-16;
# the exact coefficient set, evaluated in this exact order, IS the sampler's
# definition, so both backends reproduce it bit for bit).
_PPF_A = (2.5090809287301226727e+3, 3.3430575583588128105e+4,
          6.7265770927008700853e+4, 4.5921953931549871457e+4,
          1.3731693765509461125e+4, 1.9715909503065514427e+3,
          1.3314166789178437745e+2, 3.3871328727963666080e+0)
_PPF_B = (5.2264952788528545610e+3, 2.8729085735721942674e+4,
          3.9307895800092710610e+4, 2.1213794301586595867e+4,
          5.3941960214247511077e+3, 6.8718700749205790830e+2,
          4.2313330701600911252e+1, 1.0)
_PPF_C = (7.74545014278341407640e-4, 2.27238449892691845833e-2,
          2.41780725177450611770e-1, 1.27045825245236838258e+0,
          3.64784832476320460504e+0, 5.76949722146069140550e+0,
          4.63033784615654529590e+0, 1.42343711074968357734e+0)
_PPF_D = (1.05075007164441684324e-9, 5.47593808499534494600e-4,
          1.51986665636164571966e-2, 1.48103976427480074590e-1,
          6.89767334985100004550e-1, 1.67638483018380384940e+0,
          2.05319162663775882187e+0, 1.0)
_PPF_E = (2.01033439929228813265e-7, 2.71155556874348757815e-5,
          1.24266094738807843860e-3, 2.65321895265761230930e-2,
          2.96560571828504891230e-1, 1.78482653991729133580e+0,
          5.46378491116411436990e+0, 6.65790464350110377720e+0)
_PPF_F = (2.04426310338993978564e-15, 1.42151175831644588870e-7,
          1.84631831751005468180e-5, 7.86869131145613259100e-4,
          1.48753612908506148525e-2, 1.36929880922735805310e-1,
          5.99832206555887937690e-1, 1.0)


def _horner(coeffs, r):
    p = np.full_like(r, coeffs[0])
    for c in coeffs[1:]:
        p = p * r + c
    return p


def gauss_from_unit(u):
    """Standard-normal deviates from uniforms in (0, 1), inverse-CDF method."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    q = u - 0.5
    out = np.empty_like(u)

    central = np.abs(q) <= 0.425
    if np.any(central):
        qc = q[central]
        r = 0.180625 - qc * qc
        out[central] = qc * (_horner(_PPF_A, r) / _horner(_PPF_B, r))

    tail = ~central
    if np.any(tail):
        qt = q[tail]
        ut = u[tail]
        rt = np.where(qt < 0.0, ut, 1.0 - ut)
        rt = np.sqrt(-det_log(rt))
        zt = np.empty_like(rt)
        mid = rt <= 5.0
        if np.any(mid):
            rm = rt[mid] - 1.6
            zt[mid] = _horner(_PPF_C, rm) / _horner(_PPF_D, rm)
        far = ~mid
        if np.any(far):
            rf = rt[far] - 5.0
            zt[far] = _horner(_PPF_E, rf) / _horner(_PPF_F, rf)
        out[tail] = np.where(qt < 0.0, -zt, zt)
    return out


def fk_xy(lengths, angles):
    """End-effector (x, y) of the planar chain for each row of angles.

    angles: (B, N); lengths: (N,). Accumulation runs joint by joint in index
    order, matching the compiled kernel exactly.
    """
    angles = np.ascontiguousarray(angles, dtype=np.float64)
    lengths = np.ascontiguousarray(lengths, dtype=np.float64)
    b, n = angles.shape
    phi = np.zeros(b)
    x = np.zeros(b)
    y = np.zeros(b)
    for j in range(n):
        phi = phi + angles[:, j]
        x = x + lengths[j] * np.cos(phi)
        y = y + lengths[j] * np.sin(phi)
    out = np.empty((b, 2))
    out[:, 0] = x
    out[:, 1] = y
    return out


def neg_joint_variance(angles):
    """-(population variance) of each row of joint angles: (B, N) -> (B,).

    First-angle-centred accumulation, so identical angles give exactly 0.
    """
    angles = np.ascontiguousarray(angles, dtype=np.float64)
    b, n = angles.shape
    a0 = angles[:, 0].copy()
    acc = np.zeros(b)
    for j in range(1, n):
        acc = acc + (angles[:, j] - a0)
    mean = a0 + acc / n
    acc2 = np.zeros(b)
    for j in range(n):
        d = angles[:, j] - mean
        acc2 = acc2 + d * d
    return -(acc2 / n)


def seq_mean_var(x):
    """Per-row mean and population variance with a fixed accumulation order.

    x: (B, S). The mean is accumulated as x0 + sum(xi - x0)/S so that S
    identical samples yield exactly that sample with variance exactly 0.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    b, s = x.shape
    x0 = x[:, 0].copy()
    acc = np.zeros(b)
    for j in range(1, s):
        acc = acc + (x[:, j] - x0)
    mean = x0 + acc / s
    acc2 = np.zeros(b)
    for j in range(s):
        d = x[:, j] - mean
        acc2 = acc2 + d * d
    return mean, acc2 / s
