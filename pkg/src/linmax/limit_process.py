"""Sampling of the limiting extremal objects and their exact laws.

The limit of the normalized partial maxima is built from a Poisson
point process on ``[0,1] x (R \\ {0})`` whose mark measure has density
``(p 1_{x>0} + r 1_{x<0}) alpha |x|^(-alpha-1)``, split into running
maxima of positive and negative marks and scaled by an independent
dominant-coefficient pair.  Conditionally on that pair ``(a, b)`` the
limit is an extremal process with tail mass
``nu(u) = (p a^alpha + r b^alpha) u^(-alpha)``, which gives closed-form
marginal and bivariate distribution functions (exact for deterministic
coefficient models, Monte Carlo averaged otherwise).

Simulation truncates marks below a level ``epsilon``; the default is
chosen so that the probability of the discarded points ever mattering
(no point above ``epsilon`` at all by time 1) is below 1e-40, and the
level is recorded on every sampled point set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .cadlag import StepFunction, pointwise_max, scale
from .coefficients import (
    CoefficientModel,
    Deterministic,
    GeometricRandom,
    PowerDecay,
    c_plus_minus,
    order_for_sup_tail,
    sample_coefficients,
)
from .errors import UnsupportedModelError
from .rng import derive

_COUNT_STREAM = 0x504F4931
_TIME_STREAM = 0x504F4932
_MAGNITUDE_STREAM = 0x504F4933
_SIGN_STREAM = 0x504F4934
_COEFF_STREAM = 0x504F4935
_POINTS_STREAM = 0x504F4936
_RATE_STREAM = 0x504F4937

# head length for dominant-coefficient sampling: sup tail below this
# threshold, so the pair is exact up to a negligible flagged remainder
_CPM_SUP_TOL = 1e-9


def default_epsilon(alpha: float) -> float:
    """Truncation level with ``exp(-epsilon^-alpha) < 1e-40``."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return 0.99 * (40.0 * math.log(10.0)) ** (-1.0 / alpha)


@dataclass(frozen=True)
class MarkedPointSet:
    """Points ``(t_i, j_i)`` of the truncated Poisson process."""

    points: Tuple[Tuple[float, float], ...]
    epsilon: float
    alpha: float
    p: float
    r: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        for t, j in self.points:
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"point time outside [0, 1]: {t}")
            if not abs(j) > self.epsilon:
                raise ValueError(f"mark magnitude must exceed epsilon={self.epsilon}: {j}")


def _open_uniforms(rng: np.random.Generator, count: int) -> np.ndarray:
    # uniform on the open interval (0, 1): 53-bit lattice without endpoints
    return rng.integers(1, 1 << 53, size=count).astype(np.float64) * 2.0 ** -53


def sample_poisson_points(alpha: float, p: float, r: float, epsilon: float, seed: int) -> MarkedPointSet:
    """One draw of the mark-truncated Poisson process.

    Point count is Poisson with mean ``epsilon^-alpha`` (the mark-mass
    above the truncation level), times are i.i.d. uniform on [0, 1],
    magnitudes are Pareto(alpha) conditioned above ``epsilon``, and
    signs are positive with probability ``p``.  Count, times,
    magnitudes and signs use separate sub-streams of ``seed``, so
    changing ``p`` never perturbs the magnitudes.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not 0.0 <= p <= 1.0 or p + r != 1.0:
        raise ValueError(f"(p, r) must be a balance with p + r = 1, got ({p}, {r})")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    mean = epsilon ** -alpha
    count = int(np.random.default_rng(derive(seed, _COUNT_STREAM)).poisson(mean))
    times = np.random.default_rng(derive(seed, _TIME_STREAM)).random(count)
    u = _open_uniforms(np.random.default_rng(derive(seed, _MAGNITUDE_STREAM)), count)
    magnitudes = epsilon * u ** (-1.0 / alpha)
    u_sign = np.random.default_rng(derive(seed, _SIGN_STREAM)).random(count)
    marks = np.where(u_sign < p, magnitudes, -magnitudes)
    return MarkedPointSet(
        points=tuple(zip(times.tolist(), marks.tolist())),
        epsilon=epsilon, alpha=alpha, p=p, r=r,
    )


def _record_process(times: np.ndarray, magnitudes: np.ndarray) -> StepFunction:
    """Running max of magnitudes in time order (empty max = 0)."""
    order = np.argsort(times, kind="stable")
    initial = 0.0
    jump_t, jump_v = [], []
    best = 0.0
    for t, m in zip(times[order], magnitudes[order]):
        if m > best:
            best = m
            if t == 0.0:
                initial = m
            else:
                jump_t.append(float(t))
                jump_v.append(float(m))
    return StepFunction(initial, tuple(jump_t), tuple(jump_v))


def max_functional(pts: MarkedPointSet) -> Tuple[StepFunction, StepFunction]:
    """Split running maxima: positive-mark and negative-mark magnitudes."""
    if not pts.points:
        zero = StepFunction(0.0)
        return zero, zero
    arr = np.asarray(pts.points)
    t, j = arr[:, 0], arr[:, 1]
    pos = j > 0
    neg = j < 0
    return (
        _record_process(t[pos], j[pos]),
        _record_process(t[neg], -j[neg]),
    )


@dataclass(frozen=True)
class LimitSpec:
    """Everything needed to sample the limit process and query its law."""

    alpha: float
    p: float
    coefficient_model: CoefficientModel
    epsilon: Optional[float] = None
    r: Optional[float] = None
    coefficient_order: Optional[int] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.r is None:
            object.__setattr__(self, "r", 1.0 - self.p)
        elif self.p + self.r != 1.0:
            raise ValueError(f"p + r must equal 1 exactly, got {self.p + self.r}")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", default_epsilon(self.alpha))
        elif not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.coefficient_order is None:
            object.__setattr__(
                self, "coefficient_order",
                order_for_sup_tail(self.coefficient_model, _CPM_SUP_TOL),
            )


def sample_limit_path(spec: LimitSpec, seed: int) -> StepFunction:
    """One path of the limit process: the pointwise max of the two split
    record processes scaled by an independently drawn coefficient pair."""
    real = sample_coefficients(spec.coefficient_model, spec.coefficient_order, derive(seed, _COEFF_STREAM))
    cp, cm = c_plus_minus(real)
    pts = sample_poisson_points(spec.alpha, spec.p, spec.r, spec.epsilon, derive(seed, _POINTS_STREAM))
    phi_pos, phi_neg = max_functional(pts)
    return pointwise_max(scale(phi_pos, cp), scale(phi_neg, cm))


@dataclass(frozen=True)
class CdfEstimate:
    """A CDF value with its Monte Carlo standard error (0 when exact)."""

    value: float
    std_error: float
    method: str


def _pattern_signs(model: GeometricRandom, count: int) -> np.ndarray:
    reps = -(-count // len(model.sign_pattern))
    return np.asarray((model.sign_pattern * reps)[:count], dtype=float)


def _rate_samples(spec: LimitSpec, mc_draws: int, seed: int) -> Tuple[np.ndarray, str]:
    """Draws of ``p C+^alpha + r C-^alpha`` (a single exact value for
    deterministic models)."""
    model = spec.coefficient_model
    if isinstance(model, Deterministic):
        real = sample_coefficients(model, max(len(model.values) - 1, 0), 0)
        cp, cm = c_plus_minus(real)
        rate = spec.p * cp ** spec.alpha + spec.r * cm ** spec.alpha
        return np.asarray([rate]), "closed_form"
    if mc_draws < 1:
        raise ValueError(f"mc_draws must be positive, got {mc_draws}")
    rng = np.random.default_rng(derive(seed, _RATE_STREAM))
    j = np.arange(spec.coefficient_order + 1)
    if isinstance(model, GeometricRandom):
        amps = model.amplitude_lo + (model.amplitude_hi - model.amplitude_lo) * rng.random((mc_draws, j.size))
        coeffs = _pattern_signs(model, j.size)[None, :] * amps * np.power(model.rho, j)[None, :]
    elif isinstance(model, PowerDecay):
        bases = model.base_lo + (model.base_hi - model.base_lo) * rng.random((mc_draws, j.size))
        coeffs = bases * (j + 1.0) ** -model.beta
    else:
        raise UnsupportedModelError(f"unsupported coefficient model: {type(model).__name__}")
    cp = np.maximum(coeffs, 0.0).max(axis=1)
    cm = np.maximum(-coeffs, 0.0).max(axis=1)
    return spec.p * cp ** spec.alpha + spec.r * cm ** spec.alpha, "monte_carlo"


def _estimate(values: np.ndarray, method: str) -> CdfEstimate:
    if method == "closed_form" or values.size == 1:
        return CdfEstimate(float(values[0]), 0.0, method)
    se = float(np.std(values, ddof=1) / math.sqrt(values.size))
    return CdfEstimate(float(np.mean(values)), se, method)


def limit_marginal_cdf(
    spec: LimitSpec, t: float, x: float, mc_draws: int = 10000, seed: int = 0
) -> CdfEstimate:
    """``P(M(t) <= x)``: the coefficient average of the conditional
    extremal marginal ``exp(-t nu(x))``."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    rates, method = _rate_samples(spec, mc_draws, seed)
    return _estimate(np.exp(-t * rates * x ** -spec.alpha), method)


def limit_bivariate_cdf(
    spec: LimitSpec, s: float, t: float, x: float, y: float,
    mc_draws: int = 10000, seed: int = 0,
) -> CdfEstimate:
    """``P(M(s) <= x, M(t) <= y)`` for ``s <= t``.

    Conditionally on a coefficient pair the limit is extremal, so the
    event excludes points above ``x ^ y`` on ``[0, s]`` and above ``y``
    on ``(s, t]``; monotonicity collapses the first level to ``y``
    whenever ``x >= y``.
    """
    if not 0.0 <= s <= t <= 1.0:
        raise ValueError(f"need 0 <= s <= t <= 1, got s={s}, t={t}")
    if not (x > 0 and y > 0):
        raise ValueError(f"levels must be positive, got x={x}, y={y}")
    rates, method = _rate_samples(spec, mc_draws, seed)
    if x >= y:
        exponent = t * rates * y ** -spec.alpha
    else:
        exponent = s * rates * x ** -spec.alpha + (t - s) * rates * y ** -spec.alpha
    return _estimate(np.exp(-exponent), method)


def marginal_cdf_fn(
    spec: LimitSpec, t: float, mc_draws: int = 10000, seed: int = 0
) -> Callable[[np.ndarray], np.ndarray]:
    """A vectorized ``x -> P(M(t) <= x)`` callable sharing one set of
    coefficient draws across all evaluations (0 for ``x <= 0``)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    rates, _ = _rate_samples(spec, mc_draws, seed)
    alpha = spec.alpha

    def cdf(xs):
        arr = np.asarray(xs, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        out = np.zeros(arr.shape, dtype=float)
        pos = arr > 0
        xp = arr[pos]
        vals = np.empty(xp.shape)
        block = max(1, int(2e7) // max(rates.size, 1))
        for i in range(0, xp.size, block):
            chunk = xp[i:i + block]
            vals[i:i + block] = np.mean(
                np.exp(-t * rates[:, None] * chunk[None, :] ** -alpha), axis=0
            )
        out[pos] = vals
        return float(out[0]) if scalar else out

    return cdf
