"""Pure numpy implementation of the hot kernels.

This is the fallback selected when the compiled extension is unavailable
(see _backend).  Three things live here:

* the deterministic random stream (SplitMix64-based, see below),
* log-domain binomial tail sums with full relative precision on both tails,
* the Monte Carlo trial kernel for models whose cumulative hazard is
  piecewise power-law.

Stream contract (part of the package's external reproducibility contract,
shared bit-for-bit with the compiled kernels): trial ``j`` of a run seeded
with ``seed`` uses a SplitMix64 generator whose initial state is the
(j+1)-th output of a SplitMix64 seeded with ``seed``; draw ``d`` of that
trial is output ``d+1`` of the trial generator.  A 64-bit output ``z`` maps
to the open unit interval as ``((z >> 11) + 0.5) * 2**-53``.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

name = "python"


def _mix64(z):
    """SplitMix64 output function (finalizer) on uint64 scalars or arrays."""
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform_matrix(seed, first_trial, n_trials, n_draws):
    """Uniform(0,1) draws, one row per trial, one column per leaf draw.

    Bit-identical for any chunking: row i depends only on
    (seed, first_trial + i).
    """
    with np.errstate(over="ignore"):
        j = np.arange(first_trial + 1, first_trial + n_trials + 1,
                      dtype=np.uint64)
        s0 = _mix64(np.uint64(seed) + j * _GOLDEN)
        d = np.arange(1, n_draws + 1, dtype=np.uint64)
        z = _mix64(s0[:, None] + d[None, :] * _GOLDEN)
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def _lse_axis0(a):
    """logsumexp along axis 0, quiet on all -inf columns."""
    m = np.max(a, axis=0)
    finite = m > -np.inf
    out = np.full(a.shape[1], -np.inf)
    if np.any(finite):
        cols = a[:, finite] - m[finite]
        out[finite] = m[finite] + np.log(np.sum(np.exp(cols), axis=0))
    return out


def log_binom_tails_grid(t, n, log_p, log_r):
    """(log P(X <= t), log P(X > t)) for X ~ Binomial(n, p) on a grid.

    ``log_p`` and ``log_r`` are aligned arrays with exp(log_p) + exp(log_r)
    = 1.  The smaller tail is summed directly in log space; the larger one
    is recovered through log1p, so both carry full relative precision (the
    naive logsumexp of the larger tail rounds to 0 and loses the signal
    that the finite-difference oracles need).
    """
    log_p = np.asarray(log_p, dtype=np.float64)
    log_r = np.asarray(log_r, dtype=np.float64)
    g = log_p.shape[0]
    if t < 0:
        return np.full(g, -np.inf), np.zeros(g)
    if t >= n:
        return np.zeros(g), np.full(g, -np.inf)

    from scipy.special import gammaln
    i = np.arange(n + 1, dtype=np.float64)
    logc = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1)
    with np.errstate(invalid="ignore"):
        a = i[:, None] * log_p[None, :]
        b = (n - i)[:, None] * log_r[None, :]
    a[0, :] = 0.0      # 0 * log(0) convention at the boundary rows
    b[n, :] = 0.0
    terms = logc[:, None] + a + b

    lo = _lse_axis0(terms[: t + 1])
    hi = _lse_axis0(terms[t + 1:])
    lo_small = lo <= hi
    comp = np.log1p(-np.exp(np.where(lo_small, lo, hi)))
    return np.where(lo_small, lo, comp), np.where(lo_small, comp, hi)


def log_binom_tails(t, n, log_p, log_r):
    """Scalar variant of log_binom_tails_grid."""
    lo, hi = log_binom_tails_grid(t, n, np.array([log_p]), np.array([log_r]))
    return float(lo[0]), float(hi[0])


def order_stat_reduce(values, sizes, kth):
    """Collapse leaf lifetimes to root lifetimes, level by level.

    ``values`` has shape (trials, prod(sizes)) with leaves in row-major
    order, innermost dimension fastest.  Each level replaces every group of
    ``sizes[s]`` child lifetimes by its (kth[s]+1)-th smallest: the instant
    the (t+1)-th erasure makes the block undecodable.
    """
    arr = values.reshape((values.shape[0],) + tuple(reversed(sizes)))
    for size, k in zip(sizes, kth):
        arr = np.partition(arr, k, axis=-1)[..., k]
    return arr


def sim_chunk_powerlaw(seed, first_trial, n_trials, sizes, kth,
                       seg_x0, seg_c0, seg_beta, seg_theta):
    """Root failure times for one chunk of trials.

    The component model is given as piecewise power-law cumulative hazard
    segments: on [x0_s, x0_{s+1}) it is c0_s + ((x - x0_s)/theta_s)**beta_s.
    """
    n_leaves = 1
    for s in sizes:
        n_leaves *= int(s)
    u = uniform_matrix(seed, first_trial, n_trials, n_leaves)
    v = -np.log(u)
    idx = np.searchsorted(seg_c0, v, side="right") - 1
    idx = np.clip(idx, 0, len(seg_c0) - 1)
    x = (np.asarray(seg_x0)[idx]
         + np.asarray(seg_theta)[idx]
         * (v - np.asarray(seg_c0)[idx]) ** (1.0 / np.asarray(seg_beta)[idx]))
    return order_stat_reduce(x, sizes, kth)
