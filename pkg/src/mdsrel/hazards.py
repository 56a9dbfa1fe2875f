"""Component hazard models: constant, Weibull, composite bathtub, tabulated.

Every model exposes the same four behaviors -- hazard(x), cumulative
hazard, reliability, and the inverse cumulative hazard -- and they are
consistent by construction: reliability(x) = exp(-cumulative_hazard(x)) and
inverse undoes cumulative exactly (closed forms, no quadrature).  Time is
always in hours; methods accept scalars or numpy arrays.

Models are immutable after construction and safe to share across threads.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import NonConvergenceError

YEAR_HOURS = 8760.0


def _validate_time(x):
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("time must be >= 0 hours")
    return arr


def _validate_cumhaz(v):
    arr = np.asarray(v, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("cumulative hazard must be >= 0")
    return arr


def _match(x, arr):
    """Return a float for scalar input, the array otherwise."""
    if np.ndim(x) == 0:
        return float(np.asarray(arr).item())
    return arr


class HazardModel:
    """Common behavior for all component lifetime models."""

    def hazard(self, x):
        """Instantaneous failure rate at x hours, per hour."""
        raise NotImplementedError

    def cumulative_hazard(self, x):
        """Integral of the hazard over [0, x]; dimensionless."""
        raise NotImplementedError

    def inverse_cumulative_hazard(self, v):
        """The time at which the cumulative hazard first reaches v."""
        raise NotImplementedError

    def reliability(self, x):
        """Probability of surviving beyond x hours."""
        x = _validate_time(x)
        return _match(x, np.exp(-np.asarray(self.cumulative_hazard(x))))

    def density(self, x):
        """Failure-time density hazard(x) * reliability(x)."""
        x = _validate_time(x)
        out = np.asarray(self.hazard(x)) * np.asarray(self.reliability(x))
        return _match(x, out)

    def sample_ttf(self, u):
        """Map a uniform(0,1) draw to a failure time by inverse transform.

        The result has survival function exactly reliability(x).
        """
        u = np.asarray(u, dtype=np.float64)
        if np.any(u <= 0.0) or np.any(u >= 1.0):
            raise ValueError("uniform draw must lie strictly inside (0, 1)")
        return self.inverse_cumulative_hazard(-np.log(u))

    def power_segments(self):
        """(x0, c0, beta, theta) arrays when the cumulative hazard is
        piecewise power-law, else None.  Consumed by the fast kernels."""
        return None

    def breakpoints(self):
        """Interior non-smooth points, used as quadrature hints."""
        return ()


@dataclass(frozen=True)
class ConstantHazard(HazardModel):
    """Memoryless component: exponential lifetimes at a fixed rate/hour."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be > 0, got {self.rate!r}")

    def hazard(self, x):
        x = _validate_time(x)
        return _match(x, np.full_like(x, self.rate, dtype=np.float64))

    def cumulative_hazard(self, x):
        x = _validate_time(x)
        return _match(x, self.rate * x)

    def inverse_cumulative_hazard(self, v):
        v = _validate_cumhaz(v)
        return _match(v, v / self.rate)

    def power_segments(self):
        return (np.array([0.0]), np.array([0.0]),
                np.array([1.0]), np.array([1.0 / self.rate]))


@dataclass(frozen=True)
class WeibullHazard(HazardModel):
    """Single Weibull: hazard (shape/scale) * (x/scale)**(shape-1)."""

    shape: float
    scale: float

    def __post_init__(self):
        if not self.shape > 0:
            raise ValueError(f"shape must be > 0, got {self.shape!r}")
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale!r}")

    def hazard(self, x):
        x = _validate_time(x)
        with np.errstate(divide="ignore", over="ignore"):
            out = (self.shape / self.scale) * (x / self.scale) ** (self.shape - 1.0)
        return _match(x, out)

    def cumulative_hazard(self, x):
        x = _validate_time(x)
        with np.errstate(over="ignore"):
            out = (x / self.scale) ** self.shape
        return _match(x, out)

    def inverse_cumulative_hazard(self, v):
        v = _validate_cumhaz(v)
        return _match(v, self.scale * v ** (1.0 / self.shape))

    def power_segments(self):
        return (np.array([0.0]), np.array([0.0]),
                np.array([self.shape]), np.array([self.scale]))


@dataclass(frozen=True)
class CompositeBathtub(HazardModel):
    """Three-phase piecewise Weibull bathtub.

    Phase i contributes ((x - start_i)/theta_i)**beta_i to the cumulative
    hazard, accumulated from the phase start, so the cumulative hazard is
    continuous at the breakpoints by construction.  The defaults give the
    familiar disk shape: infant mortality (beta 0.5), a flat useful period
    (beta 1), wear-out (beta 2.5).
    """

    betas: tuple = (0.5, 1.0, 2.5)
    thetas: tuple = (100.0, 200.0, 500.0)
    knees: tuple = (100.0, 1000.0)

    def __post_init__(self):
        betas = tuple(float(b) for b in self.betas)
        thetas = tuple(float(t) for t in self.thetas)
        knees = tuple(float(t) for t in self.knees)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "knees", knees)
        if len(betas) != 3 or len(thetas) != 3 or len(knees) != 2:
            raise ValueError("need 3 shapes, 3 scales and 2 breakpoints")
        if not all(b > 0 for b in betas) or not all(t > 0 for t in thetas):
            raise ValueError("shapes and scales must be > 0")
        t1, t2 = knees
        if not 0 < t1 < t2:
            raise ValueError(f"breakpoints must satisfy 0 < t1 < t2, got {knees}")
        x0 = np.array([0.0, t1, t2])
        c0 = np.array([
            0.0,
            (t1 / thetas[0]) ** betas[0],
            (t1 / thetas[0]) ** betas[0] + ((t2 - t1) / thetas[1]) ** betas[1],
        ])
        object.__setattr__(self, "_x0", x0)
        object.__setattr__(self, "_c0", c0)
        object.__setattr__(self, "_beta", np.array(betas))
        object.__setattr__(self, "_theta", np.array(thetas))

    def _segment_of_time(self, x):
        # x == t1 belongs to the first phase, matching the <= breakpoints.
        idx = np.searchsorted(self._x0, x, side="left") - 1
        return np.clip(idx, 0, 2)

    def hazard(self, x):
        x = _validate_time(x)
        i = self._segment_of_time(x)
        b, th = self._beta[i], self._theta[i]
        with np.errstate(divide="ignore", over="ignore"):
            out = (b / th) * ((x - self._x0[i]) / th) ** (b - 1.0)
        return _match(x, out)

    def cumulative_hazard(self, x):
        x = _validate_time(x)
        i = self._segment_of_time(x)
        with np.errstate(over="ignore"):
            out = self._c0[i] + ((x - self._x0[i]) / self._theta[i]) ** self._beta[i]
        return _match(x, out)

    def inverse_cumulative_hazard(self, v):
        v = _validate_cumhaz(v)
        # side='right' puts v == c0[i] in segment i, so breakpoint levels
        # invert to the breakpoints exactly.
        i = np.clip(np.searchsorted(self._c0, v, side="right") - 1, 0, 2)
        out = self._x0[i] + self._theta[i] * (v - self._c0[i]) ** (1.0 / self._beta[i])
        return _match(v, out)

    def power_segments(self):
        return (self._x0, self._c0, self._beta, self._theta)

    def breakpoints(self):
        return self.knees


class TabulatedHazard(HazardModel):
    """Piecewise-linear hazard through (time, rate) knots.

    The grid must start at time 0; beyond the last knot the hazard is held
    constant at the final rate.  The cumulative hazard is the exact
    trapezoid integral (piecewise quadratic), inverted cell by cell.
    """

    def __init__(self, times, rates):
        times = np.asarray(times, dtype=np.float64)
        rates = np.asarray(rates, dtype=np.float64)
        if times.ndim != 1 or times.shape != rates.shape or len(times) < 2:
            raise ValueError("need matching 1-D times and rates, length >= 2")
        if times[0] != 0.0:
            raise ValueError("the time grid must start at 0 hours")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must increase strictly")
        if np.any(rates < 0):
            raise ValueError("rates must be >= 0")
        self.times = times
        self.rates = rates
        dt = np.diff(times)
        self._cum = np.concatenate(
            ([0.0], np.cumsum(0.5 * (rates[:-1] + rates[1:]) * dt)))

    def __repr__(self):
        return f"TabulatedHazard({len(self.times)} knots, up to {self.times[-1]} h)"

    def __eq__(self, other):
        return (isinstance(other, TabulatedHazard)
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.rates, other.rates))

    def __hash__(self):
        return hash((self.times.tobytes(), self.rates.tobytes()))

    def hazard(self, x):
        x = _validate_time(x)
        return _match(x, np.interp(x, self.times, self.rates))

    def cumulative_hazard(self, x):
        x = _validate_time(x)
        i = np.clip(np.searchsorted(self.times, x, side="right") - 1,
                    0, len(self.times) - 1)
        s = x - self.times[i]
        lam_x = np.interp(x, self.times, self.rates)
        out = self._cum[i] + 0.5 * s * (self.rates[i] + lam_x)
        return _match(x, out)

    def inverse_cumulative_hazard(self, v):
        v = _validate_cumhaz(v)
        tail = v > self._cum[-1]
        if np.any(tail) and self.rates[-1] <= 0.0:
            raise NonConvergenceError(
                "cumulative hazard is bounded by "
                f"{self._cum[-1]!r} (final tabulated rate is 0) "
                f"and never reaches {float(np.max(v))!r}")
        i = np.clip(np.searchsorted(self._cum, v, side="right") - 1,
                    0, len(self.times) - 2)
        w = v - self._cum[i]
        a = self.rates[i]
        dt = self.times[i + 1] - self.times[i]
        b = 0.5 * (self.rates[i + 1] - self.rates[i]) / dt
        disc = np.sqrt(np.maximum(a * a + 4.0 * b * w, 0.0))
        denom = a + disc
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(denom > 0.0, 2.0 * w / np.where(denom > 0, denom, 1.0), 0.0)
        out = self.times[i] + s
        if np.ndim(v) == 0:
            if tail:
                out = self.times[-1] + (v - self._cum[-1]) / self.rates[-1]
            return float(out)
        out = np.where(tail,
                       self.times[-1] + (v - self._cum[-1]) / np.maximum(self.rates[-1], 1e-300),
                       out)
        return out

    def breakpoints(self):
        return tuple(self.times[1:-1])


def mttf(survival, truncation_eps=1e-9, x_cap=None, points=()):
    """Mean time to failure: the integral of a survival function over time.

    The integration range [0, X*] is found by doubling x until
    survival(x) < truncation_eps (bounded by x_cap when given); adaptive
    quadrature handles [0, X*] and the remainder is closed with an
    exponential-tail estimate fitted to the local decay rate, so the
    truncated mass contributes only ~truncation_eps relative error even
    before the fit.  Raises NonConvergenceError when survival never drops
    below the threshold inside the search budget or cap.
    """
    if not 0.0 < truncation_eps <= 1e-3:
        raise ValueError("truncation_eps must lie in (0, 1e-3]")
    x = 1e-9
    for _ in range(1200):
        if survival(x) < truncation_eps:
            break
        if x_cap is not None and x >= x_cap:
            raise NonConvergenceError(
                f"survival is still {survival(x_cap)!r} at the cap "
                f"{x_cap!r} h, above the truncation threshold {truncation_eps!r}")
        x *= 2.0
        if x_cap is not None:
            x = min(x, x_cap)
    else:
        raise NonConvergenceError(
            "survival did not fall below the truncation threshold "
            f"{truncation_eps!r} within the search budget")
    x_star = x
    interior = sorted(p for p in points if 0.0 < p < x_star)
    head, _ = integrate.quad(survival, 0.0, x_star,
                             points=interior or None,
                             limit=300, epsabs=0.0, epsrel=1e-10)
    s1 = survival(x_star)
    tail = 0.0
    if s1 > 0.0:
        x2 = x_star * 1.02
        s2 = survival(x2)
        if s2 > 0.0:
            rate = math.log(s1 / s2) / (x2 - x_star)
            if rate <= 0.0:
                raise NonConvergenceError(
                    f"survival is not decaying past {x_star!r} h; "
                    "cannot bound the tail")
            tail = s1 / rate
    return head + tail


def afr(mttf_hours):
    """Annualized failure rate from an MTTF: 1 - exp(-8760/MTTF)."""
    if not mttf_hours > 0:
        raise ValueError(f"MTTF must be > 0 hours, got {mttf_hours!r}")
    return -math.expm1(-YEAR_HOURS / mttf_hours)
