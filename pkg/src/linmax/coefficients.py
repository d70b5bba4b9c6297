"""Coefficient sequences for linear processes.

Three families are supported, each with closed-form tail control so
that truncation orders, dominant-coefficient pairs and moment-series
checks are certifiable rather than estimated:

* ``Deterministic`` -- a fixed finite vector, zero tail.
* ``GeometricRandom`` -- ``C_j = s_j * A_j * rho**j`` with i.i.d.
  amplitudes ``A_j`` uniform on ``[lo, hi]``, ``|rho| < 1`` and an
  optional repeating sign pattern ``s_j``.
* ``PowerDecay`` -- ``C_j = B_j * (j + 1)**(-beta)`` with i.i.d.
  bounded bases ``B_j`` uniform on ``[lo, hi]``.

Amplitude/base draws are keyed by coefficient index, so sampling the
same model at a larger order extends the head without changing the
values already drawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import NonSummableTailError, UnsupportedModelError
from .rng import stream_uniforms

_AMPLITUDE_STREAM = 0x434F4546

# Fixed witness exponents: the convergence conditions only require
# existence, and fixed formulas keep reports reproducible.
_DELTA_CAP = 1.99


@dataclass(frozen=True)
class Deterministic:
    """A fixed, finite coefficient vector; trailing zeros are trimmed."""

    values: Tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        while vals and vals[-1] == 0.0:
            vals = vals[:-1]
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class GeometricRandom:
    rho: float
    amplitude_lo: float = 1.0
    amplitude_hi: float = 1.0
    sign_pattern: Tuple[int, ...] = (1,)

    def __post_init__(self):
        if not abs(self.rho) < 1:
            raise ValueError(f"|rho| must be < 1, got {self.rho}")
        if not 0.0 <= self.amplitude_lo <= self.amplitude_hi:
            raise ValueError("amplitude interval must satisfy 0 <= lo <= hi")
        if not math.isfinite(self.amplitude_hi):
            raise ValueError("amplitude interval must be bounded")
        if not self.sign_pattern or any(s not in (-1, 1) for s in self.sign_pattern):
            raise ValueError("sign_pattern must be a nonempty sequence of +-1")


@dataclass(frozen=True)
class PowerDecay:
    beta: float
    base_lo: float = 1.0
    base_hi: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 0.0 <= self.base_lo <= self.base_hi:
            raise ValueError("base interval must satisfy 0 <= lo <= hi")
        if not math.isfinite(self.base_hi):
            raise ValueError("base interval must be bounded")


CoefficientModel = Union[Deterministic, GeometricRandom, PowerDecay]


@dataclass(frozen=True)
class CoefficientRealization:
    """A sampled head ``(c_0, ..., c_order)`` plus certified tail bounds.

    ``tail_sup``/``tail_sum`` bound ``sup_{j>order} |C_j|`` and
    ``sum_{j>order} |C_j|`` for the generating model.  The one-sided
    ``tail_pos_sup``/``tail_neg_sup`` bound the positive part of the
    tail coefficients and of their negatives; for ``Deterministic``
    they are exact (``tail_exact`` is True), for the random families
    they are attainability-aware upper bounds.
    """

    head: Tuple[float, ...]
    order: int
    tail_sup: float
    tail_sum: float
    tail_pos_sup: float
    tail_neg_sup: float
    tail_exact: bool
    model: CoefficientModel
    seed: int

    @property
    def c_plus_minus_exact(self) -> bool:
        """False when a tail bound, rather than the head, decides C+/C-."""
        if self.tail_exact:
            return True
        head = np.asarray(self.head)
        head_plus = float(np.max(np.append(head, 0.0).clip(min=0.0)))
        head_minus = float(np.max(np.append(-head, 0.0).clip(min=0.0)))
        return self.tail_pos_sup <= head_plus and self.tail_neg_sup <= head_minus


def _tail_signs_geometric(model: GeometricRandom, first_j: int) -> set:
    """Signs attainable by ``s_j * rho**j`` for ``j >= first_j``."""
    if model.amplitude_hi == 0.0 or model.rho == 0.0:
        return set()
    period = len(model.sign_pattern) * (2 if model.rho < 0 else 1)
    signs = set()
    for j in range(first_j, first_j + period):
        s = model.sign_pattern[j % len(model.sign_pattern)]
        if model.rho < 0 and j % 2 == 1:
            s = -s
        signs.add(s)
    return signs


def sample_coefficients(model: CoefficientModel, order: int, seed: int) -> CoefficientRealization:
    """Sample ``c_0, ..., c_order`` with closed-form tail bounds.

    Deterministic given ``seed``; the draw for coefficient ``j`` does
    not depend on ``order``, so extending the head is a refinement.
    """
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    j = np.arange(order + 1)

    if isinstance(model, Deterministic):
        vals = np.zeros(order + 1)
        present = min(order + 1, len(model.values))
        vals[:present] = model.values[:present]
        tail_vals = np.asarray(model.values[order + 1:], dtype=float)
        tail_sup = float(np.max(np.abs(tail_vals), initial=0.0))
        tail_sum = float(np.sum(np.abs(tail_vals)))
        tail_pos = float(np.max(tail_vals.clip(min=0.0), initial=0.0))
        tail_neg = float(np.max((-tail_vals).clip(min=0.0), initial=0.0))
        return CoefficientRealization(
            head=tuple(vals), order=order, tail_sup=tail_sup, tail_sum=tail_sum,
            tail_pos_sup=tail_pos, tail_neg_sup=tail_neg, tail_exact=True,
            model=model, seed=seed,
        )

    if isinstance(model, GeometricRandom):
        u = stream_uniforms(seed, _AMPLITUDE_STREAM, j)
        amps = model.amplitude_lo + (model.amplitude_hi - model.amplitude_lo) * u
        signs = np.asarray([model.sign_pattern[k % len(model.sign_pattern)] for k in range(order + 1)], dtype=float)
        vals = signs * amps * np.power(model.rho, j)
        abs_rho = abs(model.rho)
        tail_sup = model.amplitude_hi * abs_rho ** (order + 1)
        tail_sum = tail_sup / (1.0 - abs_rho)
        tail_sign = _tail_signs_geometric(model, order + 1)
        return CoefficientRealization(
            head=tuple(vals), order=order, tail_sup=tail_sup, tail_sum=tail_sum,
            tail_pos_sup=tail_sup if 1 in tail_sign else 0.0,
            tail_neg_sup=tail_sup if -1 in tail_sign else 0.0,
            tail_exact=(tail_sup == 0.0),
            model=model, seed=seed,
        )

    if isinstance(model, PowerDecay):
        u = stream_uniforms(seed, _AMPLITUDE_STREAM, j)
        bases = model.base_lo + (model.base_hi - model.base_lo) * u
        vals = bases * (j + 1.0) ** -model.beta
        tail_sup = model.base_hi * float(order + 2) ** -model.beta
        if model.beta > 1:
            # integral test: sum_{j>J} (j+1)^-beta <= (J+1)^(1-beta) / (beta-1)
            tail_sum = model.base_hi * float(order + 1) ** (1.0 - model.beta) / (model.beta - 1.0)
        else:
            tail_sum = math.inf if model.base_hi > 0 else 0.0
        return CoefficientRealization(
            head=tuple(vals), order=order, tail_sup=tail_sup, tail_sum=tail_sum,
            tail_pos_sup=tail_sup, tail_neg_sup=0.0,
            tail_exact=(tail_sup == 0.0),
            model=model, seed=seed,
        )

    raise UnsupportedModelError(f"unsupported coefficient model: {type(model).__name__}")


def c_plus_minus(real: CoefficientRealization) -> Tuple[float, float]:
    """The dominant-coefficient pair ``(C+, C-)``.

    ``C+ = max(C_j v 0 : j >= 0)`` and ``C- = max(-C_j v 0 : j >= 0)``,
    evaluated over the stored head plus the certified one-sided tail
    bounds.  Exact for deterministic models; for random families the
    value is an upper estimate whenever the tail bound exceeds the head
    maximum (see :attr:`CoefficientRealization.c_plus_minus_exact`).
    """
    head = np.asarray(real.head)
    head_plus = float(np.max(np.append(head, 0.0).clip(min=0.0)))
    head_minus = float(np.max(np.append(-head, 0.0).clip(min=0.0)))
    return max(head_plus, real.tail_pos_sup), max(head_minus, real.tail_neg_sup)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the closed-form moment-series checks for one model.

    ``delta`` and ``gamma`` are the fixed witness exponents used;
    ``gamma`` is only meaningful for ``alpha < 1`` (None otherwise).
    ``sufficient`` combines the individual series per the tail index:
    fractional + small-exponent sums for ``alpha < 1``, fractional +
    absolute sums at ``alpha == 1``, absolute sum alone for
    ``alpha > 1``.
    """

    alpha: float
    delta: float
    gamma: Optional[float]
    passes_delta_moment_sum: bool   # sum_j E|C_j|^delta < inf, delta in (0, alpha)
    passes_gamma_moment_sum: bool   # sum_j E|C_j|^gamma < inf, gamma in (alpha, 1)
    passes_abs_moment_sum: bool     # sum_j E|C_j| < inf
    sufficient: bool
    explanation: str


def _series_converges(model: CoefficientModel, exponent: float) -> bool:
    """Whether ``sum_j E|C_j|**exponent`` converges, in closed form."""
    if isinstance(model, Deterministic):
        return True
    if isinstance(model, GeometricRandom):
        # E|C_j|^s <= hi^s |rho|^(s j): geometric in j for every s > 0
        return True
    if isinstance(model, PowerDecay):
        if model.base_hi == 0.0:
            return True
        return model.beta * exponent > 1.0
    raise UnsupportedModelError(f"unsupported coefficient model: {type(model).__name__}")


def check_moment_conditions(model: CoefficientModel, alpha: float) -> ConditionReport:
    """Evaluate the convergence conditions for the given tail index.

    Never passes silently: an unknown model family raises
    :class:`UnsupportedModelError`.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not isinstance(model, (Deterministic, GeometricRandom, PowerDecay)):
        raise UnsupportedModelError(f"unsupported coefficient model: {type(model).__name__}")

    delta = 0.5 * min(alpha, _DELTA_CAP)
    gamma = 0.5 * (alpha + 1.0) if alpha < 1 else None

    passes_delta = _series_converges(model, delta)
    passes_gamma = _series_converges(model, gamma) if gamma is not None else True
    passes_abs = _series_converges(model, 1.0)

    failures = []
    if not passes_delta:
        failures.append(f"sum of E|C_j|^{delta:g} diverges")
    if gamma is not None and not passes_gamma:
        failures.append(f"sum of E|C_j|^{gamma:g} diverges")
    if not passes_abs:
        failures.append("sum of E|C_j| diverges")

    if alpha < 1:
        sufficient = passes_delta and passes_gamma
        needed = "fractional-moment sums at both witness exponents"
    elif alpha == 1:
        sufficient = passes_delta and passes_abs
        needed = "fractional-moment sum and absolute-coefficient sum"
    else:
        sufficient = passes_abs
        needed = "absolute-coefficient sum"

    if sufficient:
        explanation = f"conditions for alpha={alpha:g} hold ({needed})"
    else:
        explanation = f"conditions for alpha={alpha:g} fail: " + "; ".join(failures)
    return ConditionReport(
        alpha=alpha, delta=delta, gamma=gamma,
        passes_delta_moment_sum=passes_delta,
        passes_gamma_moment_sum=passes_gamma,
        passes_abs_moment_sum=passes_abs,
        sufficient=sufficient, explanation=explanation,
    )


def _abs_tail_sum_bound(model: CoefficientModel, q: int) -> float:
    """Closed-form bound on ``sum_{j>q} sup|C_j|``."""
    if isinstance(model, Deterministic):
        return float(np.sum(np.abs(model.values[q + 1:])))
    if isinstance(model, GeometricRandom):
        if model.amplitude_hi == 0.0 or model.rho == 0.0:
            return 0.0
        abs_rho = abs(model.rho)
        return model.amplitude_hi * abs_rho ** (q + 1) / (1.0 - abs_rho)
    if isinstance(model, PowerDecay):
        if model.base_hi == 0.0:
            return 0.0
        if model.beta <= 1:
            return math.inf
        return model.base_hi * float(q + 1) ** (1.0 - model.beta) / (model.beta - 1.0)
    raise UnsupportedModelError(f"unsupported coefficient model: {type(model).__name__}")


def truncation_order(model: CoefficientModel, tol: float) -> int:
    """Smallest order ``q`` whose certified tail sum bound is ``<= tol``.

    Deterministic vectors return their exact support end (the tail is
    identically zero beyond it).  A power model with ``beta <= 1`` has
    a divergent tail sum and raises :class:`NonSummableTailError`.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if isinstance(model, Deterministic):
        return max(len(model.values) - 1, 0)
    if isinstance(model, (GeometricRandom, PowerDecay)):
        if isinstance(model, PowerDecay) and model.beta <= 1 and model.base_hi > 0:
            raise NonSummableTailError(
                f"absolute coefficient sum diverges: power decay exponent beta={model.beta:g} <= 1"
            )
        if _abs_tail_sum_bound(model, 0) <= tol:
            return 0
        if isinstance(model, GeometricRandom):
            abs_rho = abs(model.rho)
            guess = math.log(tol * (1.0 - abs_rho) / model.amplitude_hi) / math.log(abs_rho) - 1.0
        else:
            guess = (model.base_hi / (tol * (model.beta - 1.0))) ** (1.0 / (model.beta - 1.0)) - 1.0
        q = max(int(math.ceil(guess)), 0)
        while _abs_tail_sum_bound(model, q) > tol:
            q += 1
        while q > 0 and _abs_tail_sum_bound(model, q - 1) <= tol:
            q -= 1
        return q
    raise UnsupportedModelError(f"unsupported coefficient model: {type(model).__name__}")


def order_for_sup_tail(model: CoefficientModel, tol: float, cap: int = 4096) -> int:
    """Smallest order whose sup-tail bound is ``<= tol``, capped at ``cap``.

    Unlike the summed tail, the sup tail is finite for every supported
    family, so this works even for slowly decaying power models; the
    cap keeps heads at a size the samplers can afford, at the price of
    an inexact (flagged) dominant-coefficient pair.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if isinstance(model, Deterministic):
        return max(len(model.values) - 1, 0)
    if isinstance(model, GeometricRandom):
        if model.amplitude_hi == 0.0 or model.rho == 0.0:
            return 0
        abs_rho = abs(model.rho)
        guess = math.log(tol / model.amplitude_hi) / math.log(abs_rho) - 1.0
        q = max(int(math.ceil(guess)), 0)
        while model.amplitude_hi * abs_rho ** (q + 1) > tol and q < cap:
            q += 1
        return min(q, cap)
    if isinstance(model, PowerDecay):
        if model.base_hi == 0.0:
            return 0
        guess = (model.base_hi / tol) ** (1.0 / model.beta) - 2.0
        q = max(int(math.ceil(guess)), 0)
        while model.base_hi * float(q + 2) ** -model.beta > tol and q < cap:
            q += 1
        return min(q, cap)
    raise UnsupportedModelError(f"unsupported coefficient model: {type(model).__name__}")
