"""Empirical-distribution utilities: empirical CDFs and the one-sample
Kolmogorov-Smirnov test with asymptotic p-values."""

from __future__ import annotations

import math
import warnings
from typing import Callable, Tuple

import numpy as np

_SERIES_TOL = 1e-12


def empirical_cdf(samples) -> Callable:
    """Right-continuous step CDF of the sample; evaluable at any real
    (scalars or arrays)."""
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise ValueError("empirical_cdf requires a nonempty sample")
    n = arr.size

    def cdf(x):
        q = np.asarray(x, dtype=float)
        out = np.searchsorted(arr, q, side="right") / n
        return float(out) if q.ndim == 0 else out

    return cdf


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the Kolmogorov distribution.

    Alternating series truncated once terms drop below 1e-12; the dual
    (theta-transformed) representation covers small arguments where the
    direct series converges slowly.
    """
    if lam <= 0:
        return 1.0
    if lam < 0.2:
        # sf = 1 - sqrt(2 pi)/lam * sum exp(-(2k-1)^2 pi^2 / (8 lam^2))
        total = 0.0
        k = 1
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * math.pi ** 2 / (8.0 * lam * lam))
            total += term
            if term < _SERIES_TOL or k > 100:
                break
            k += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / lam * total))
    total = 0.0
    sign = 1.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        total += sign * term
        if term < _SERIES_TOL or k > 100000:
            break
        sign = -sign
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_test(samples, cdf: Callable) -> Tuple[float, float]:
    """One-sample Kolmogorov-Smirnov statistic and asymptotic p-value.

    ``D`` is the exact sup-gap between the empirical CDF and ``cdf``,
    evaluated from both one-sided gaps at the sample points.  The
    p-value uses the asymptotic Kolmogorov law; for fewer than 50
    samples it is only a rough guide and a warning is emitted.
    """
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise ValueError("ks_test requires a nonempty sample")
    n = arr.size
    try:
        f_vals = np.asarray(cdf(arr), dtype=float)
        if f_vals.shape != arr.shape:
            raise TypeError
    except TypeError:
        f_vals = np.asarray([cdf(x) for x in arr], dtype=float)
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - f_vals))
    d_minus = float(np.max(f_vals - (i - 1) / n))
    d = max(d_plus, d_minus, 0.0)
    if n < 50:
        warnings.warn("ks_test p-value is asymptotic and approximate for n < 50", stacklevel=2)
    return d, kolmogorov_sf(math.sqrt(n) * d)
