# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of `_kernels_py`: identical operations, scalar loops.

Compiled with -ffp-contract=off so no FMA contraction can change results;
every function is bit-identical to its numpy counterpart.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt, fabs, frexp
from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    """
    static inline uint64_t uqd_mulhi64(uint64_t a, uint64_t b) {
        return (uint64_t)(((__uint128_t)a * b) >> 64);
    }
    """
    uint64_t uqd_mulhi64(uint64_t a, uint64_t b) nogil

cdef uint64_t PHILOX_M0 = 0xD2E7470EE14C6C93ULL
cdef uint64_t PHILOX_M1 = 0xCA5A826395121157ULL
cdef uint64_t PHILOX_W0 = 0x9E3779B97F4A7C15ULL
cdef uint64_t PHILOX_W1 = 0xBB67AE8584CAA73BULL

cdef double U64_TO_UNIT = 2.0 ** -52

cdef inline void _philox_block(uint64_t c0, uint64_t c1, uint64_t c2, uint64_t c3,
                               uint64_t k0, uint64_t k1, uint64_t* out) nogil:
    cdef int r
    cdef uint64_t hi0, lo0, hi1, lo1, n0, n1, n2, n3
    for r in range(10):
        hi0 = uqd_mulhi64(PHILOX_M0, c0)
        lo0 = PHILOX_M0 * c0
        hi1 = uqd_mulhi64(PHILOX_M1, c2)
        lo1 = PHILOX_M1 * c2
        n0 = hi1 ^ c1 ^ k0
        n1 = lo1
        n2 = hi0 ^ c3 ^ k1
        n3 = lo0
        c0 = n0; c1 = n1; c2 = n2; c3 = n3
        if r < 9:
            k0 = k0 + PHILOX_W0
            k1 = k1 + PHILOX_W1
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3


def philox_blocks(key0, key1, start_block, n_blocks):
    """Blocks [start, start+n) of stream (key0, key1), as (n_blocks*4,) uint64."""
    cdef uint64_t k0 = <uint64_t> (int(key0) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t k1 = <uint64_t> (int(key1) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t start = <uint64_t> (int(start_block) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n = n_blocks
    out_arr = np.empty(n * 4, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(n):
        _philox_block(start + <uint64_t> i, 0, 0, 0, k0, k1, &out[4 * i])
    return out_arr


def philox_many(key0, key1s, n_blocks):
    """First n_blocks blocks of many streams: (E,) ids -> (E, 4*n_blocks) uint64."""
    cdef uint64_t k0 = <uint64_t> (int(key0) & 0xFFFFFFFFFFFFFFFF)
    ids_arr = np.ascontiguousarray(key1s, dtype=np.uint64)
    cdef uint64_t[::1] ids = ids_arr
    cdef Py_ssize_t e = ids.shape[0]
    cdef Py_ssize_t nb = n_blocks
    out_arr = np.empty((e, 4 * nb), dtype=np.uint64)
    cdef uint64_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, b
    for i in range(e):
        for b in range(nb):
            _philox_block(<uint64_t> b, 0, 0, 0, k0, ids[i], &out[i, 4 * b])
    return out_arr


def u64_to_unit(u):
    """Map uint64 words to doubles in the open interval (0, 1)."""
    u_arr = np.ascontiguousarray(u, dtype=np.uint64)
    cdef uint64_t[::1] uv = u_arr
    cdef Py_ssize_t n = uv.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = (<double> (uv[i] >> 12) + 0.5) * U64_TO_UNIT
    return out_arr


cdef double LN2_HI = 6.93147180369123816490e-01
cdef double LN2_LO = 1.90821492927058770002e-10
cdef double SQRT_HALF = 0.70710678118654752440

cdef inline double _det_log(double x) nogil:
    cdef int e
    cdef double m = frexp(x, &e)
    cdef double ef, s, z, p, ln_m
    if m < SQRT_HALF:
        m = m * 2.0
        e = e - 1
    ef = <double> e
    s = (m - 1.0) / (m + 1.0)
    z = s * s
    p = 1.0 / 25.0
    p = p * z + 1.0 / 23.0
    p = p * z + 1.0 / 21.0
    p = p * z + 1.0 / 19.0
    p = p * z + 1.0 / 17.0
    p = p * z + 1.0 / 15.0
    p = p * z + 1.0 / 13.0
    p = p * z + 1.0 / 11.0
    p = p * z + 1.0 / 9.0
    p = p * z + 1.0 / 7.0
    p = p * z + 1.0 / 5.0
    p = p * z + 1.0 / 3.0
    p = p * z + 1.0
    ln_m = 2.0 * (s * p)
    return ef * LN2_HI + (ef * LN2_LO + ln_m)


def det_log(x):
    """Natural log on (0, 1], from +,-,*,/ and frexp only (backend-identical)."""
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] xv = x_arr
    cdef Py_ssize_t n = xv.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _det_log(xv[i])
    return out_arr


cdef inline double _gauss_from_unit(double u) nogil:
    cdef double q = u - 0.5
    cdef double r, num, den, z
    if fabs(q) <= 0.425:
        r = 0.180625 - q * q
        num = 2.5090809287301226727e+3
        num = num * r + 3.3430575583588128105e+4
        num = num * r + 6.7265770927008700853e+4
        num = num * r + 4.5921953931549871457e+4
        num = num * r + 1.3731693765509461125e+4
        num = num * r + 1.9715909503065514427e+3
        num = num * r + 1.3314166789178437745e+2
        num = num * r + 3.3871328727963666080e+0
        den = 5.2264952788528545610e+3
        den = den * r + 2.8729085735721942674e+4
        den = den * r + 3.9307895800092710610e+4
        den = den * r + 2.1213794301586595867e+4
        den = den * r + 5.3941960214247511077e+3
        den = den * r + 6.8718700749205790830e+2
        den = den * r + 4.2313330701600911252e+1
        den = den * r + 1.0
        return q * (num / den)
    if q < 0.0:
        r = u
    else:
        r = 1.0 - u
    r = sqrt(-_det_log(r))
    if r <= 5.0:
        r = r - 1.6
        num = 7.74545014278341407640e-4
        num = num * r + 2.27238449892691845833e-2
        num = num * r + 2.41780725177450611770e-1
        num = num * r + 1.27045825245236838258e+0
        num = num * r + 3.64784832476320460504e+0
        num = num * r + 5.76949722146069140550e+0
        num = num * r + 4.63033784615654529590e+0
        num = num * r + 1.42343711074968357734e+0
        den = 1.05075007164441684324e-9
        den = den * r + 5.47593808499534494600e-4
        den = den * r + 1.51986665636164571966e-2
        den = den * r + 1.48103976427480074590e-1
        den = den * r + 6.89767334985100004550e-1
        den = den * r + 1.67638483018380384940e+0
        den = den * r + 2.05319162663775882187e+0
        den = den * r + 1.0
    else:
        r = r - 5.0
        num = 2.01033439929228813265e-7
        num = num * r + 2.71155556874348757815e-5
        num = num * r + 1.24266094738807843860e-3
        num = num * r + 2.65321895265761230930e-2
        num = num * r + 2.96560571828504891230e-1
        num = num * r + 1.78482653991729133580e+0
        num = num * r + 5.46378491116411436990e+0
        num = num * r + 6.65790464350110377720e+0
        den = 2.04426310338993978564e-15
        den = den * r + 1.42151175831644588870e-7
        den = den * r + 1.84631831751005468180e-5
        den = den * r + 7.86869131145613259100e-4
        den = den * r + 1.48753612908506148525e-2
        den = den * r + 1.36929880922735805310e-1
        den = den * r + 5.99832206555887937690e-1
        den = den * r + 1.0
    z = num / den
    if q < 0.0:
        return -z
    return z


def gauss_from_unit(u):
    """Standard-normal deviates from uniforms in (0, 1), inverse-CDF method."""
    u_arr = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[::1] uv = u_arr
    cdef Py_ssize_t n = uv.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _gauss_from_unit(uv[i])
    return out_arr


def fk_xy(lengths, angles):
    """End-effector (x, y) of the planar chain for each row of angles."""
    l_arr = np.ascontiguousarray(lengths, dtype=np.float64)
    a_arr = np.ascontiguousarray(angles, dtype=np.float64)
    cdef double[::1] lv = l_arr
    cdef double[:, ::1] av = a_arr
    cdef Py_ssize_t b = av.shape[0]
    cdef Py_ssize_t n = av.shape[1]
    out_arr = np.empty((b, 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double phi, x, y
    for i in range(b):
        phi = 0.0
        x = 0.0
        y = 0.0
        for j in range(n):
            phi = phi + av[i, j]
            x = x + lv[j] * cos(phi)
            y = y + lv[j] * sin(phi)
        out[i, 0] = x
        out[i, 1] = y
    return out_arr


def neg_joint_variance(angles):
    """-(population variance) of each row of joint angles: (B, N) -> (B,).

    First-angle-centred accumulation, so identical angles give exactly 0.
    """
    a_arr = np.ascontiguousarray(angles, dtype=np.float64)
    cdef double[:, ::1] av = a_arr
    cdef Py_ssize_t b = av.shape[0]
    cdef Py_ssize_t n = av.shape[1]
    out_arr = np.empty(b, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double a0, acc, mean, d
    for i in range(b):
        a0 = av[i, 0]
        acc = 0.0
        for j in range(1, n):
            acc = acc + (av[i, j] - a0)
        mean = a0 + acc / n
        acc = 0.0
        for j in range(n):
            d = av[i, j] - mean
            acc = acc + d * d
        out[i] = -(acc / n)
    return out_arr


def seq_mean_var(x):
    """Per-row mean and population variance with a fixed accumulation order."""
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] xv = x_arr
    cdef Py_ssize_t b = xv.shape[0]
    cdef Py_ssize_t s = xv.shape[1]
    mean_arr = np.empty(b, dtype=np.float64)
    var_arr = np.empty(b, dtype=np.float64)
    cdef double[::1] mv = mean_arr
    cdef double[::1] vv = var_arr
    cdef Py_ssize_t i, j
    cdef double x0, acc, mean, d
    for i in range(b):
        x0 = xv[i, 0]
        acc = 0.0
        for j in range(1, s):
            acc = acc + (xv[i, j] - x0)
        mean = x0 + acc / s
        mv[i] = mean
        acc = 0.0
        for j in range(s):
            d = xv[i, j] - mean
            acc = acc + d * d
        vv[i] = acc / s
    return mean_arr, var_arr
