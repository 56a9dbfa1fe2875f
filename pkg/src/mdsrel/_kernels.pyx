# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementation of the hot kernels.

Mirrors _kernels_py exactly: same stream contract (bit-identical uniforms),
same two-tail log-domain binomial sums, same Monte Carlo trial kernel for
piecewise power-law cumulative hazards.  See _kernels_py for the documented
contracts; this module only trades Python loops for C ones.
"""

import numpy as np

from libc.math cimport INFINITY, exp, lgamma, log, log1p, pow

name = "compiled"

cdef unsigned long long GOLDEN = 0x9E3779B97F4A7C15ULL
cdef unsigned long long MIX1 = 0xBF58476D1CE4E5B9ULL
cdef unsigned long long MIX2 = 0x94D049BB133111EBULL
cdef double TWO53 = 9007199254740992.0


cdef inline unsigned long long _mix64(unsigned long long z) nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double _uniform(unsigned long long z) nogil:
    return ((<double> (z >> 11)) + 0.5) / TWO53


def uniform_matrix(seed, first_trial, n_trials, n_draws):
    """Uniform(0,1) draws, one row per trial; see _kernels_py for the contract."""
    out = np.empty((n_trials, n_draws), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef unsigned long long useed = <unsigned long long> seed
    cdef unsigned long long first = <unsigned long long> first_trial
    cdef unsigned long long s0
    cdef Py_ssize_t i, d, nt = n_trials, nd = n_draws
    with nogil:
        for i in range(nt):
            s0 = _mix64(useed + (first + <unsigned long long> i + 1ULL) * GOLDEN)
            for d in range(nd):
                o[i, d] = _uniform(_mix64(s0 + (<unsigned long long> d + 1ULL) * GOLDEN))
    return out


cdef inline double _log_binom(double n, double i) nogil:
    return lgamma(n + 1.0) - lgamma(i + 1.0) - lgamma(n - i + 1.0)


cdef void _tails_with_coeffs(long t, long n, const double* logc,
                             double log_p, double log_r,
                             double* out_lo, double* out_hi) nogil:
    """Both log binomial tails at t, the smaller one summed directly.

    logc[i] must hold ln C(n, i); hoisting it out makes grid evaluation
    cheap (the lgamma calls dominate otherwise).
    """
    cdef double m_lo = -INFINITY, s_lo = 0.0
    cdef double m_hi = -INFINITY, s_hi = 0.0
    cdef double term, a, b, lo, hi
    cdef long i
    if t < 0:
        out_lo[0] = -INFINITY
        out_hi[0] = 0.0
        return
    if t >= n:
        out_lo[0] = 0.0
        out_hi[0] = -INFINITY
        return
    for i in range(n + 1):
        a = 0.0 if i == 0 else i * log_p
        b = 0.0 if i == n else (n - i) * log_r
        term = logc[i] + a + b
        if term == -INFINITY:
            continue
        if i <= t:
            if term > m_lo:
                s_lo = s_lo * exp(m_lo - term) + 1.0
                m_lo = term
            else:
                s_lo += exp(term - m_lo)
        else:
            if term > m_hi:
                s_hi = s_hi * exp(m_hi - term) + 1.0
                m_hi = term
            else:
                s_hi += exp(term - m_hi)
    lo = m_lo + log(s_lo) if m_lo > -INFINITY else -INFINITY
    hi = m_hi + log(s_hi) if m_hi > -INFINITY else -INFINITY
    if lo <= hi:
        hi = log1p(-exp(lo))
    else:
        lo = log1p(-exp(hi))
    out_lo[0] = lo
    out_hi[0] = hi


def _binom_coeffs(long n):
    out = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] v = out
    cdef long i
    with nogil:
        for i in range(n + 1):
            v[i] = _log_binom(<double> n, <double> i)
    return out


def log_binom_tails(t, n, log_p, log_r):
    """Scalar (log P(X <= t), log P(X > t)) for X ~ Binomial(n, p)."""
    cdef double lo, hi
    coeffs = _binom_coeffs(n)
    cdef double[::1] vc = coeffs
    _tails_with_coeffs(t, n, &vc[0], log_p, log_r, &lo, &hi)
    return lo, hi


def log_binom_tails_grid(t, n, log_p, log_r):
    """Grid variant: aligned arrays of log p and log(1-p)."""
    lp = np.ascontiguousarray(log_p, dtype=np.float64)
    lr = np.ascontiguousarray(log_r, dtype=np.float64)
    cdef double[::1] vp = lp
    cdef double[::1] vr = lr
    cdef Py_ssize_t g = vp.shape[0], j
    out_lo = np.empty(g, dtype=np.float64)
    out_hi = np.empty(g, dtype=np.float64)
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    coeffs = _binom_coeffs(n)
    cdef double[::1] vc = coeffs
    cdef long tt = t, nn = n
    with nogil:
        for j in range(g):
            _tails_with_coeffs(tt, nn, &vc[0], vp[j], vr[j], &olo[j], &ohi[j])
    return out_lo, out_hi


cdef double _select_kth(double* a, long n, long k) nogil:
    """k-th smallest (0-based) of a[0:n]; reorders the segment."""
    cdef long lo = 0, hi = n - 1, i, j
    cdef double pivot, tmp
    while True:
        if lo >= hi:
            return a[k]
        pivot = a[lo + ((hi - lo) >> 1)]
        i = lo
        j = hi
        while i <= j:
            while a[i] < pivot:
                i += 1
            while a[j] > pivot:
                j -= 1
            if i <= j:
                tmp = a[i]
                a[i] = a[j]
                a[j] = tmp
                i += 1
                j -= 1
        if k <= j:
            hi = j
        elif k >= i:
            lo = i
        else:
            return a[k]


def sim_chunk_powerlaw(seed, first_trial, n_trials, sizes, kth,
                       seg_x0, seg_c0, seg_beta, seg_theta):
    """Root failure times for one chunk of trials (power-law models)."""
    sz = np.ascontiguousarray(sizes, dtype=np.int64)
    ks = np.ascontiguousarray(kth, dtype=np.int64)
    x0 = np.ascontiguousarray(seg_x0, dtype=np.float64)
    c0 = np.ascontiguousarray(seg_c0, dtype=np.float64)
    beta = np.ascontiguousarray(seg_beta, dtype=np.float64)
    theta = np.ascontiguousarray(seg_theta, dtype=np.float64)
    cdef long[::1] vsz = sz
    cdef long[::1] vks = ks
    cdef double[::1] vx0 = x0
    cdef double[::1] vc0 = c0
    cdef double[::1] vbeta = beta
    cdef double[::1] vtheta = theta
    cdef Py_ssize_t levels = vsz.shape[0], nseg = vc0.shape[0]
    cdef long n_leaves = 1
    cdef Py_ssize_t lev
    for lev in range(levels):
        n_leaves *= vsz[lev]

    out = np.empty(n_trials, dtype=np.float64)
    scratch = np.empty(n_leaves, dtype=np.float64)
    cdef double[::1] vout = out
    cdef double[::1] buf = scratch
    cdef unsigned long long useed = <unsigned long long> seed
    cdef unsigned long long first = <unsigned long long> first_trial
    cdef unsigned long long s0
    cdef Py_ssize_t i, d, nt = n_trials
    cdef long m, bs, kk, nblocks, b
    cdef double u, v
    cdef Py_ssize_t j
    with nogil:
        for i in range(nt):
            s0 = _mix64(useed + (first + <unsigned long long> i + 1ULL) * GOLDEN)
            for d in range(n_leaves):
                u = _uniform(_mix64(s0 + (<unsigned long long> d + 1ULL) * GOLDEN))
                v = -log(u)
                j = nseg - 1
                while j > 0 and vc0[j] > v:
                    j -= 1
                buf[d] = vx0[j] + vtheta[j] * pow(v - vc0[j], 1.0 / vbeta[j])
            m = n_leaves
            for lev in range(levels):
                bs = vsz[lev]
                kk = vks[lev]
                nblocks = m / bs
                for b in range(nblocks):
                    buf[b] = _select_kth(&buf[b * bs], bs, kk)
                m = nblocks
            vout[i] = buf[0]
    return out
