"""Piecewise-constant cadlag functions on [0, 1] and their completed graphs.

A :class:`StepFunction` is right-continuous with left limits, constant
between jumps, and normalized on construction: zero-size jumps are
dropped, so equality of step functions is plain representation
equality.  Values at ``t = 1`` are first-class (a jump time may be 1).

The completed graph fills each jump with the vertical segment between
the left limit and the value, producing the orthogonal polyline that
the graph metrics operate on.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class StepFunction:
    """``initial_value`` on ``[0, t_1)``, then ``post_jump_values[k]`` on
    ``[t_k, t_{k+1})`` (and through 1 for the last jump)."""

    initial_value: float
    jump_times: Tuple[float, ...] = ()
    post_jump_values: Tuple[float, ...] = ()

    def __post_init__(self):
        times = tuple(float(t) for t in self.jump_times)
        values = tuple(float(v) for v in self.post_jump_values)
        if len(times) != len(values):
            raise ValueError("jump_times and post_jump_values must have equal length")
        initial = float(self.initial_value)
        if not math.isfinite(initial) or not all(map(math.isfinite, values)):
            raise ValueError("step function values must be finite")
        prev_t = 0.0
        for t in times:
            if not prev_t < t <= 1.0:
                raise ValueError(f"jump times must be strictly increasing in (0, 1], got {t}")
            prev_t = t
        # normalize: drop stored jumps that do not change the value
        kept_t: List[float] = []
        kept_v: List[float] = []
        level = initial
        for t, v in zip(times, values):
            if v != level:
                kept_t.append(t)
                kept_v.append(v)
                level = v
        object.__setattr__(self, "initial_value", initial)
        object.__setattr__(self, "jump_times", tuple(kept_t))
        object.__setattr__(self, "post_jump_values", tuple(kept_v))

    @property
    def levels(self) -> Tuple[float, ...]:
        """All values taken, in time order (initial first)."""
        return (self.initial_value,) + self.post_jump_values

    @property
    def final_value(self) -> float:
        return self.post_jump_values[-1] if self.post_jump_values else self.initial_value

    @property
    def is_nondecreasing(self) -> bool:
        prev = self.initial_value
        for v in self.post_jump_values:
            if v < prev:
                return False
            prev = v
        return True

    def first_decreasing_jump(self) -> float:
        """Time of the first downward jump; raises if nondecreasing."""
        prev = self.initial_value
        for t, v in zip(self.jump_times, self.post_jump_values):
            if v < prev:
                return t
            prev = v
        raise ValueError("step function is nondecreasing")


def evaluate(f: StepFunction, t: float) -> Tuple[float, float]:
    """Return ``(x(t), x(t-))``; the left limit at 0 is defined as ``x(0)``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    # rightmost jump with time <= t gives the value, time < t the left limit
    i_val = bisect.bisect_right(f.jump_times, t)
    i_left = bisect.bisect_left(f.jump_times, t)
    value = f.post_jump_values[i_val - 1] if i_val > 0 else f.initial_value
    left = f.post_jump_values[i_left - 1] if i_left > 0 else f.initial_value
    return value, left


def running_max(f: StepFunction) -> StepFunction:
    """``t -> sup_{s <= t} f(s)``; nondecreasing, idempotent on monotone input."""
    best = f.initial_value
    times: List[float] = []
    values: List[float] = []
    for t, v in zip(f.jump_times, f.post_jump_values):
        if v > best:
            best = v
            times.append(t)
            values.append(v)
    return StepFunction(f.initial_value, tuple(times), tuple(values))


def _merged_jump_times(f: StepFunction, g: StepFunction) -> List[float]:
    merged = sorted(set(f.jump_times) | set(g.jump_times))
    return merged


def pointwise_max(f: StepFunction, g: StepFunction) -> StepFunction:
    """``t -> f(t) v g(t)``; the jump set is contained in the union."""
    times = _merged_jump_times(f, g)
    values = [max(evaluate(f, t)[0], evaluate(g, t)[0]) for t in times]
    return StepFunction(max(f.initial_value, g.initial_value), tuple(times), tuple(values))


def scale(f: StepFunction, factor: float) -> StepFunction:
    """Pointwise multiplication by a constant."""
    return StepFunction(
        factor * f.initial_value,
        f.jump_times,
        tuple(factor * v for v in f.post_jump_values),
    )


@dataclass(frozen=True)
class CompletedGraph:
    """Orthogonal polyline tracing a step function's completed graph.

    Consecutive vertices share a coordinate; the first vertex is
    ``(0, x(0))`` and the last ``(1, x(1))``.  At each jump the polyline
    runs the full vertical segment from the left limit to the value, in
    the graph order (time first, then distance from the left limit).
    """

    vertices: Tuple[Tuple[float, float], ...]

    def segments(self) -> np.ndarray:
        """Segments as an ``(S, 4)`` array of ``(t0, z0, t1, z1)`` rows."""
        v = np.asarray(self.vertices)
        return np.hstack([v[:-1], v[1:]])


def completed_graph(f: StepFunction) -> CompletedGraph:
    verts: List[Tuple[float, float]] = [(0.0, f.initial_value)]
    level = f.initial_value
    for t, v in zip(f.jump_times, f.post_jump_values):
        verts.append((t, level))
        verts.append((t, v))
        level = v
    if verts[-1][0] != 1.0:
        verts.append((1.0, level))
    return CompletedGraph(tuple(verts))


def to_json_dict(f: StepFunction) -> dict:
    return {
        "initial": f.initial_value,
        "jumps": [{"t": t, "value": v} for t, v in zip(f.jump_times, f.post_jump_values)],
    }


def from_json_dict(obj: dict) -> StepFunction:
    jumps = obj.get("jumps", [])
    return StepFunction(
        obj["initial"],
        tuple(j["t"] for j in jumps),
        tuple(j["value"] for j in jumps),
    )


def dumps(f: StepFunction) -> str:
    """JSON text; float fields round-trip exactly (shortest-repr decimals)."""
    return json.dumps(to_json_dict(f))


def loads(text: str) -> StepFunction:
    return from_json_dict(json.loads(text))


def csv_rows(f: StepFunction) -> List[Tuple[float, float]]:
    """``(t, value)`` pairs at 0 and at each jump, for plotting."""
    return [(0.0, f.initial_value)] + list(zip(f.jump_times, f.post_jump_values))


def from_samples(initial_value: float, times: Sequence[float], values: Iterable[float]) -> StepFunction:
    """Build from right-continuous samples; no-op samples are normalized away."""
    return StepFunction(initial_value, tuple(times), tuple(values))
