"""I.i.d. innovations with exact two-sided Pareto tails.

The innovation law is the exact-Pareto member of the regularly varying
family: ``P(|Z| > x) = (x / scale)^(-alpha)`` for ``x >= scale`` and 1
below the scale threshold, with the sign carrying the tail balance
``(p, r)``.  Keeping the slowly varying part constant makes the norming
sequence and every limit marginal closed-form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .rng import stream_uniforms

_MAGNITUDE_STREAM = 0x4D41474E
_SIGN_STREAM = 0x5349474E


@dataclass(frozen=True)
class TailLaw:
    """Tail index ``alpha``, balance ``(p, r)`` and scale threshold.

    ``r`` may be omitted and defaults to ``1 - p``; when given it must
    satisfy ``p + r == 1`` exactly.
    """

    alpha: float
    p: float
    scale: float = 1.0
    r: Optional[float] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.r is None:
            object.__setattr__(self, "r", 1.0 - self.p)
        elif self.p + self.r != 1.0:
            raise ValueError(f"p + r must equal 1 exactly, got {self.p + self.r}")


def tail_prob(law: TailLaw, x) -> float:
    """``P(|Z| > x)`` for the exact-Pareto law; accepts scalars or arrays.

    Monotone nonincreasing in ``x``; equals 1 for ``0 < x < scale``.
    Non-positive ``x`` is a domain error.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("tail_prob requires x > 0")
    out = np.where(arr >= law.scale, (arr / law.scale) ** -law.alpha, 1.0)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def norming_constant(law: TailLaw, n: int) -> float:
    """The scaling ``a_n`` solving ``n * tail_prob(a_n) = 1``.

    Closed form for the exact-Pareto family: ``scale * n**(1/alpha)``.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return law.scale * float(n) ** (1.0 / law.alpha)


def innovations_at(law: TailLaw, seed, indices) -> np.ndarray:
    """Innovations ``Z_i`` for an arbitrary array of integer indices.

    Magnitude and sign come from separate sub-streams of ``seed``, so
    changing the balance ``p`` never perturbs magnitudes.  ``seed`` may
    be an array of child seeds broadcasting against ``indices``, which
    is how the harness samples whole replicate blocks at once.
    """
    u_mag = stream_uniforms(seed, _MAGNITUDE_STREAM, indices)
    u_sign = stream_uniforms(seed, _SIGN_STREAM, indices)
    magnitudes = law.scale * u_mag ** (-1.0 / law.alpha)
    signs = np.where(u_sign < law.p, 1.0, -1.0)
    return magnitudes * signs


def sample_innovations(law: TailLaw, count: int, seed: int) -> np.ndarray:
    """``count`` i.i.d. draws ``Z_1, ..., Z_count``, deterministic in ``seed``."""
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    return innovations_at(law, seed, np.arange(1, count + 1))
