"""Closed-form reliability of MDS-parity protected component arrays.

The model: a block of n identical components, k of them data, protected by
an (n, k) MDS code, so the block survives until t+1 = n-k+1 components have
failed.  Blocks nest: a T-dimensional array applies one code per dimension,
and a level-s block fails as soon as more than its erasure budget of
level-(s-1) blocks have failed.  Everything here reduces to binomial tail
sums over the component reliability, evaluated in the log domain so that
block sizes in the thousands deep into wear-out stay representable.

The central quantity is the hazard rate *per data component*: the block
failure rate divided by the number of data components it carries.  For a
single block it satisfies

    per_component_hazard(x) = lam(x)/r * (1 - Q_{t-1,n-1}(x) / Q_{t,n}(x))

where Q_{t,n} is the probability that at most t of n components have
failed by x, and equivalently (the form computed here, which has no
cancellation at either end of life)

    per_component_hazard(x) = lam(x) * (n/k) * C(n-1,t) p^t R^(n-t) / Q_{t,n}

with p = 1 - R the component failure probability.  Both forms follow from
the block failure density n*lam*C(n-1,t)*p^t*R^(n-t): the density of the
(t+1)-th order statistic of the component lifetimes.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import NonConvergenceError, SingularityError, SurvivalUnderflowError
from .hazards import HazardModel, _match, _validate_cumhaz, _validate_time
from .specialmath import log_binomial

__all__ = [
    "MdsCode",
    "ArrayConfig",
    "block_survival",
    "weighted_failure_cdf",
    "component_hazard",
    "component_hazard_lower_bound",
    "replication_component_hazard",
    "parity_component_hazard",
    "asymptotic_component_hazard",
    "reliability_crossing_time",
    "adaptive_limit_constant",
    "array_component_hazard",
    "system_survival",
    "system_failure_density",
    "array_hazard",
    "CodedBlockHazard",
]


@dataclass(frozen=True)
class MdsCode:
    """(n, k) MDS erasure code geometry for one array dimension.

    Corrects any t = n - k erasures; rate r = k/n.
    """

    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.k, int):
            raise ValueError("n and k must be integers")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"require 1 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def t(self) -> int:
        return self.n - self.k

    @property
    def r(self) -> float:
        return self.k / self.n

    def __str__(self):
        return f"({self.n},{self.k})"


@dataclass(frozen=True)
class ArrayConfig:
    """Ordered per-dimension codes of a T-dimensional array.

    dims[0] is the innermost dimension: its code groups raw components into
    level-1 blocks, dims[1] groups those blocks, and so on.
    """

    dims: tuple

    def __post_init__(self):
        dims = tuple(self.dims)
        if not dims:
            raise ValueError("need at least one dimension")
        if not all(isinstance(c, MdsCode) for c in dims):
            raise ValueError("dims must be MdsCode instances")
        object.__setattr__(self, "dims", dims)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def n_total(self) -> int:
        out = 1
        for c in self.dims:
            out *= c.n
        return out

    @property
    def k_total(self) -> int:
        out = 1
        for c in self.dims:
            out *= c.k
        return out

    @property
    def r_total(self) -> float:
        return self.k_total / self.n_total

    def __str__(self):
        return "x".join(str(c) for c in self.dims)


def _as_config(code_or_config) -> ArrayConfig:
    if isinstance(code_or_config, ArrayConfig):
        return code_or_config
    if isinstance(code_or_config, MdsCode):
        return ArrayConfig((code_or_config,))
    raise ValueError(f"expected MdsCode or ArrayConfig, got {code_or_config!r}")


# ---------------------------------------------------------------------------
# binomial failure-count sums


def _check_reliability(value):
    r = float(value)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reliability must lie in [0, 1], got {value!r}")
    return r


def _log_pq_of_reliability(reliability):
    r = _check_reliability(reliability)
    log_r = math.log(r) if r > 0.0 else -math.inf
    log_p = math.log1p(-r) if r < 1.0 else -math.inf
    return log_p, log_r


def block_survival(t: int, n: int, reliability: float) -> float:
    """Probability that at most t of n i.i.d. components have failed.

    This is the survival probability of an (n, n-t) MDS block whose
    components are individually alive with the given probability; with
    t = n it is 1 for any reliability.
    """
    if not 0 <= t <= n:
        raise ValueError(f"require 0 <= t <= n, got t={t}, n={n}")
    log_p, log_r = _log_pq_of_reliability(reliability)
    lo, _ = _backend.log_binom_tails(t, n, log_p, log_r)
    return math.exp(lo)


def weighted_failure_cdf(z: int, t: int, n: int, reliability: float) -> float:
    """sum_{i<=t} C(n,i) C(i,z) p^i R^(n-i) with p = 1 - reliability.

    The z-th falling-factorial-weighted partial binomial sum (z = 0 reduces
    to block_survival).  It can exceed 1; it is a weighted sum, not a
    probability.  Identity used by the density derivation and its tests:
    dividing by the plain sum at (t-z, n-z) yields C(n,z) p^z exactly.
    """
    if not 0 <= z <= n:
        raise ValueError(f"require 0 <= z <= n, got z={z}, n={n}")
    if not 0 <= t <= n:
        raise ValueError(f"require 0 <= t <= n, got t={t}, n={n}")
    if z > t:
        return 0.0
    log_p, log_r = _log_pq_of_reliability(reliability)
    terms = []
    for i in range(z, t + 1):
        a = 0.0 if i == 0 else i * log_p
        b = 0.0 if i == n else (n - i) * log_r
        terms.append(log_binomial(n, i) + log_binomial(i, z) + a + b)
    m = max(terms)
    if m == -math.inf:
        return 0.0
    return math.exp(m) * sum(math.exp(v - m) for v in terms)


# ---------------------------------------------------------------------------
# per-component hazard of a single block


_LN2 = math.log(2.0)


def _log1mexp(cum):
    """log(1 - exp(-cum)) elementwise with full precision on both ends."""
    cum = np.asarray(cum, dtype=np.float64)
    out = np.empty_like(cum)
    small = cum < _LN2
    with np.errstate(divide="ignore"):
        out[small] = np.log(-np.expm1(-cum[small]))
    out[~small] = np.log1p(-np.exp(-cum[~small]))
    return out


def _log_pq_arrays(model, x):
    cum = np.atleast_1d(np.asarray(model.cumulative_hazard(x), dtype=np.float64))
    return _log1mexp(cum), -cum


def _hazard_times_factor(lam, log_factor):
    """lam * exp(log_factor) with the 0 * inf corner pinned to 0."""
    lam = np.atleast_1d(np.asarray(lam, dtype=np.float64))
    out = np.zeros_like(lam)
    live = log_factor > -np.inf
    out[live] = lam[live] * np.exp(log_factor[live])
    return out


def _raise_underflow(x, log_lo, n, t):
    bad = np.isneginf(log_lo)
    if np.any(bad):
        xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
        raise SurvivalUnderflowError(float(xa[np.argmax(bad)]), n, t)


def component_hazard(x, code: MdsCode, model: HazardModel):
    """Hazard per data component of one MDS-protected block at x hours.

    Exactly the component hazard when the code has no parity (t = 0); zero
    at x = 0 whenever t >= 1; approaches the component hazard from below as
    the component reliability decays.
    """
    x = _validate_time(x)
    lam = model.hazard(x)
    if code.t == 0:
        return lam
    n, k, t = code.n, code.k, code.t
    log_p, log_r = _log_pq_arrays(model, x)
    log_lo, _ = _backend.log_binom_tails_grid(t, n, log_p, log_r)
    _raise_underflow(x, log_lo, n, t)
    log_factor = (math.log(n) - math.log(k) + log_binomial(n - 1, t)
                  + t * log_p + (n - t) * log_r - log_lo)
    return _match(x, _hazard_times_factor(lam, log_factor))


def _rate_of(code_or_config_or_rate):
    if isinstance(code_or_config_or_rate, MdsCode):
        return code_or_config_or_rate.r
    if isinstance(code_or_config_or_rate, ArrayConfig):
        return code_or_config_or_rate.r_total
    rate = float(code_or_config_or_rate)
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"code rate must lie in (0, 1], got {rate!r}")
    return rate


def component_hazard_lower_bound(x, code, model: HazardModel):
    """Universal floor of the per-component hazard for a code of this rate.

    lam(x) * max{0, (1 - R(x)/r) / (1 - R(x))}: exactly zero while the
    component reliability is at least the code rate (including x = 0, where
    the 0/0 limit is taken as 0), and approaching lam(x) as R decays.
    """
    x = _validate_time(x)
    r = _rate_of(code)
    lam = np.atleast_1d(np.asarray(model.hazard(x), dtype=np.float64))
    rel = np.atleast_1d(np.asarray(model.reliability(x), dtype=np.float64))
    out = np.zeros_like(lam)
    live = rel < r  # bound is exactly 0 for R >= r
    out[live] = lam[live] * (1.0 - rel[live] / r) / (1.0 - rel[live])
    return _match(x, out)


def replication_component_hazard(x, n: int, model: HazardModel):
    """Per data component hazard of n-way replication, closed form.

    n * lam * R * (1-R)^(n-1) / (1 - (1-R)^n); agrees with
    component_hazard for the (n, 1) code.
    """
    if not n >= 1:
        raise ValueError(f"require n >= 1, got {n}")
    x = _validate_time(x)
    lam = np.atleast_1d(np.asarray(model.hazard(x), dtype=np.float64))
    if n == 1:
        return _match(x, lam)
    cum = np.atleast_1d(np.asarray(model.cumulative_hazard(x), dtype=np.float64))
    log_p = _log1mexp(cum)
    out = np.zeros_like(lam)
    dead = np.exp(-cum) == 0.0  # R rounds to 0: the ratio limit is 1
    out[dead] = lam[dead]
    live = (cum > 0.0) & ~dead
    lp = log_p[live]
    num = n * np.exp(-cum[live] + (n - 1) * lp)
    den = -np.expm1(n * lp)
    out[live] = lam[live] * num / den
    return _match(x, out)


def parity_component_hazard(x, n: int, model: HazardModel):
    """Per data component hazard of a single-parity (n, n-1) block.

    lam * n*(1-R) / (n*(1-R) + R); agrees with component_hazard for the
    (n, n-1) code.
    """
    if not n >= 2:
        raise ValueError(f"require n >= 2, got {n}")
    x = _validate_time(x)
    lam = np.atleast_1d(np.asarray(model.hazard(x), dtype=np.float64))
    cum = np.atleast_1d(np.asarray(model.cumulative_hazard(x), dtype=np.float64))
    rel = np.exp(-cum)
    p = -np.expm1(-cum)
    out = np.zeros_like(lam)
    live = p > 0.0
    out[live] = lam[live] * n * p[live] / (n * p[live] + rel[live])
    return _match(x, out)


# ---------------------------------------------------------------------------
# asymptotics


def asymptotic_component_hazard(q: float, r: float, hazard_at_a: float) -> float:
    """Large-array limit of the per-component hazard at the time when the
    component reliability equals 1/q.

    lam(a) * (q r - 1)/(r (q - 1)) for r >= 1/q, else 0: below rate 1/q an
    arbitrarily large array keeps its data components hazard-free at that
    age.  Continuous at r = 1/q.
    """
    if not q > 1:
        raise ValueError(f"require q > 1, got {q!r}")
    if not 0.0 < r <= 1.0:
        raise ValueError(f"require 0 < r <= 1, got {r!r}")
    if r < 1.0 / q:
        return 0.0
    return hazard_at_a * (q * r - 1.0) / (r * (q - 1.0))


def reliability_crossing_time(model: HazardModel, q: float) -> float:
    """The age a at which the component reliability has fallen to 1/q,
    i.e. the solution of cumulative_hazard(a) = ln q."""
    if not q > 1:
        raise ValueError(f"require q > 1, got {q!r}")
    return float(model.inverse_cumulative_hazard(math.log(q)))


def adaptive_limit_constant(regime: str, r: float, reliability=None) -> float:
    """Scaling constant C in the adaptive-growth limit lam(x) * C / n.

    When the array size n grows while the component reliability decays so
    that n*R stays bounded ('late' regime), C = 1/r.  When n grows near
    x = 0 with n*(1-R) bounded ('early'), C = (1-R)/((R-r)(2R-r-1)),
    singular where either factor vanishes.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError(f"require 0 < r <= 1, got {r!r}")
    if regime == "late":
        return 1.0 / r
    if regime != "early":
        raise ValueError(f"regime must be 'late' or 'early', got {regime!r}")
    if reliability is None:
        raise ValueError("the early regime needs the component reliability")
    rel = _check_reliability(reliability)
    f1 = rel - r
    f2 = 2.0 * rel - r - 1.0
    if f1 == 0.0:
        raise SingularityError(
            f"R - r vanished (R = r = {r!r}); the early-regime constant diverges")
    if f2 == 0.0:
        raise SingularityError(
            f"2R - r - 1 vanished (R = {rel!r}, r = {r!r}); "
            "the early-regime constant diverges")
    return (1.0 - rel) / (f1 * f2)


# ---------------------------------------------------------------------------
# multidimensional arrays


def _iter_levels(config, x, model):
    """Yield per-level (code, log_block_fail, log_block_surv_parent) data.

    Walks the nesting from raw components upward: level s sees its children
    as i.i.d. 'components' whose reliability is the level-(s-1) block
    survival, so one binomial-tails evaluation per level suffices.
    """
    log_p, log_r = _log_pq_arrays(model, x)
    for code in config.dims:
        log_s, log_f = _backend.log_binom_tails_grid(code.t, code.n, log_p, log_r)
        yield code, log_p, log_r, log_s
        log_p, log_r = log_f, log_s


def array_component_hazard(x, config, model: HazardModel):
    """Hazard per data component of a (possibly multidimensional) array.

    One dimension reduces exactly to component_hazard.  Deeper levels apply
    the same single-block formula with the child-block survival playing the
    component-reliability role and the child per-component hazard scaled by
    the child data count: the block hazard is the sum of the hazards of the
    data components it carries.
    """
    config = _as_config(config)
    x = _validate_time(x)
    lam = np.atleast_1d(np.asarray(model.hazard(x), dtype=np.float64))
    log_factor = np.zeros_like(lam)
    for code, log_p, log_r, log_s in _iter_levels(config, x, model):
        if code.t == 0:
            continue
        _raise_underflow(x, log_s, code.n, code.t)
        log_factor += (math.log(code.n) - math.log(code.k)
                       + log_binomial(code.n - 1, code.t)
                       + code.t * log_p + (code.n - code.t) * log_r - log_s)
    return _match(x, _hazard_times_factor(lam, log_factor))


def system_survival(x, config, model: HazardModel):
    """Probability the whole array is still decodable at x hours.

    Nested binomial tails: each level survives while at most its erasure
    budget of child blocks has failed; a failed block counts all its
    components as lost.
    """
    config = _as_config(config)
    x = _validate_time(x)
    log_s = None
    for _code, _lp, _lr, log_s in _iter_levels(config, x, model):
        pass
    return _match(x, np.exp(log_s))


def system_failure_density(x, code: MdsCode, model: HazardModel):
    """Failure-time density of a single block: the (t+1)-th order statistic
    of its n component lifetimes, lam * n * C(n-1,t) * p^t * R^(n-t)."""
    x = _validate_time(x)
    lam = np.atleast_1d(np.asarray(model.hazard(x), dtype=np.float64))
    n, t = code.n, code.t
    log_p, log_r = _log_pq_arrays(model, x)
    log_factor = math.log(n) + log_binomial(n - 1, t) + (n - t) * log_r
    if t > 0:
        log_factor = log_factor + t * log_p
    return _match(x, _hazard_times_factor(lam, log_factor))


def array_hazard(x, config, model: HazardModel):
    """Failure rate of the whole array: k_total times the per data
    component hazard, which also equals -d ln system_survival / dx."""
    config = _as_config(config)
    return config.k_total * array_component_hazard(x, config, model)


class CodedBlockHazard(HazardModel):
    """A coded array exposed as a single synthetic component.

    Its cumulative hazard is -ln of the array survival and its hazard is
    the array hazard, both computed analytically, so nesting one of these
    inside another code reproduces the multilevel recursion exactly.  The
    inverse cumulative hazard is a numeric solve (bracket doubling plus
    Brent), since no closed form exists.
    """

    def __init__(self, config, model: HazardModel):
        self.config = _as_config(config)
        self.model = model

    def hazard(self, x):
        return array_hazard(x, self.config, self.model)

    def cumulative_hazard(self, x):
        x = _validate_time(x)
        log_s = None
        for _code, _lp, _lr, log_s in _iter_levels(self.config, x, self.model):
            pass
        return _match(x, -log_s)

    def inverse_cumulative_hazard(self, v):
        v = _validate_cumhaz(v)
        out = np.array([self._invert_one(float(val)) for val in np.atleast_1d(v)])
        return _match(v, out)

    def _invert_one(self, v):
        if v == 0.0:
            return 0.0
        hi = 1.0
        for _ in range(1100):
            if self.cumulative_hazard(hi) >= v:
                break
            hi *= 2.0
        else:
            raise NonConvergenceError(
                f"array cumulative hazard never reaches {v!r}")
        from scipy.optimize import brentq
        return brentq(lambda y: self.cumulative_hazard(y) - v, 0.0, hi,
                      xtol=1e-12 * hi, rtol=8.9e-16)
