"""Linear-process paths, finite-order approximants, and the running-max
step processes built from them.

A path of length ``n`` with coefficient order ``J`` consumes exactly the
innovations with indices ``1-J, ..., n``; because innovation draws are
keyed by index, simulating the same seed at a different order couples
the paths on their shared innovations instead of resampling them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cadlag import StepFunction
from .coefficients import CoefficientRealization, sample_coefficients
from .innovations import TailLaw, innovations_at, norming_constant


@dataclass(frozen=True, eq=False)
class SimulatedPath:
    """One realization ``X_1, ..., X_n`` (unnormalized) plus provenance.

    ``tail_error_estimate`` bounds the neglected coefficient tail using
    the certified tail sum and the largest sampled innovation magnitude
    (a proxy: innovations older than the sampled window are unseen).
    """

    n: int
    a_n: float
    x: np.ndarray
    innovations: np.ndarray
    first_index: int
    realization: CoefficientRealization
    law: TailLaw
    seed: int
    tail_error_estimate: float

    @property
    def observed_innovations(self) -> np.ndarray:
        """``Z_1, ..., Z_n`` (drops the ``J`` warm-up lags)."""
        return self.innovations[self.realization.order:]


def simulate_path(law: TailLaw, real: CoefficientRealization, n: int, seed: int) -> SimulatedPath:
    """``X_i = sum_j c_j Z_{i-j}`` for ``i = 1..n`` over the stored head."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    order = real.order
    indices = np.arange(1 - order, n + 1)
    z = innovations_at(law, seed, indices)
    x = np.convolve(z, np.asarray(real.head), mode="valid")
    max_abs_z = float(np.max(np.abs(z)))
    return SimulatedPath(
        n=n,
        a_n=norming_constant(law, n),
        x=x,
        innovations=z,
        first_index=1 - order,
        realization=real,
        law=law,
        seed=seed,
        tail_error_estimate=real.tail_sum * max_abs_z,
    )


def finite_order_approx(real: CoefficientRealization, q: int) -> CoefficientRealization:
    """Order-``q`` approximant ``(c_0, ..., c_{q-2}, cmax, cmin)``.

    ``cmax``/``cmin`` are the extremes of the coefficients from lag
    ``q - 1`` on, taken over the stored head, the certified one-sided
    tail bounds, and 0 (the tail's closure point).  When the head is
    shorter than ``q`` it is first extended with the same seed, which
    draws identical values for the lags already present.
    """
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    if q - 1 > real.order:
        real = sample_coefficients(real.model, q, real.seed)
    head = np.asarray(real.head)
    tail_head = head[q - 1:]
    cands_max = [0.0, real.tail_pos_sup]
    cands_min = [0.0, -real.tail_neg_sup]
    if tail_head.size:
        cands_max.append(float(tail_head.max()))
        cands_min.append(float(tail_head.min()))
    new_head = tuple(head[: q - 1]) + (max(cands_max), min(cands_min))
    return CoefficientRealization(
        head=new_head, order=q,
        tail_sup=0.0, tail_sum=0.0, tail_pos_sup=0.0, tail_neg_sup=0.0,
        tail_exact=True, model=real.model, seed=real.seed,
    )


def coupling_gap(real: CoefficientRealization, approx: CoefficientRealization) -> float:
    """``sum_j |c_j - c^q_j|`` over the lags both realizations cover.

    Multiplied by the largest shared innovation magnitude this bounds
    ``max_i |X_i - X_i^q|`` for paths simulated from the same seed.
    """
    full = np.asarray(real.head)
    trunc = np.zeros_like(full)
    m = min(len(real.head), len(approx.head))
    trunc[:m] = approx.head[:m]
    return float(np.sum(np.abs(full - trunc)))


def _running_max_step(initial_value: float, values: np.ndarray, n: int) -> StepFunction:
    m = np.maximum.accumulate(values)
    change = np.empty(n, dtype=bool)
    change[0] = m[0] != initial_value
    change[1:] = m[1:] > m[:-1]
    ks = np.nonzero(change)[0]
    times = (ks + 1) / n
    return StepFunction(initial_value, tuple(times), tuple(m[ks]))


def partial_maxima(path: SimulatedPath, initial_convention: str = "first_value") -> StepFunction:
    """The normalized running-max step process of a simulated path.

    Value ``max(X_1..X_{floor(nt)}) / a_n`` for ``t >= 1/n``; on
    ``[0, 1/n)`` either ``X_1 / a_n`` (default) or 0, both conventions
    appearing side by side in the underlying limit theory.
    """
    if initial_convention not in ("first_value", "zero"):
        raise ValueError(f"unknown initial convention: {initial_convention!r}")
    v = path.x / path.a_n
    initial = float(v[0]) if initial_convention == "first_value" else 0.0
    return _running_max_step(initial, v, path.n)


def innovation_max_process(innovations, a_n: float, c_plus: float, c_minus: float) -> StepFunction:
    """Running max of ``|Z_i| (C+ 1{Z_i>0} + C- 1{Z_i<0}) / a_n``.

    The comparison process whose distance to the partial maxima
    vanishes in the limit; 0 on ``[0, 1/n)`` (empty max convention).
    """
    if not a_n > 0:
        raise ValueError(f"a_n must be positive, got {a_n}")
    z = np.asarray(innovations, dtype=float)
    weights = np.where(z > 0, c_plus, np.where(z < 0, c_minus, 0.0))
    v = np.abs(z) / a_n * weights
    return _running_max_step(0.0, v, len(z))
