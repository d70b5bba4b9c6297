"""Shared test utilities: random step functions and the brute-force
graph-sampling Hausdorff oracle used to cross-check the metric kernel."""

import numpy as np

from linmax.cadlag import StepFunction, completed_graph


def random_step_function(rng, max_jumps=10, value_range=(-2.0, 2.0)):
    n_jumps = int(rng.integers(0, max_jumps + 1))
    times = np.unique(rng.random(n_jumps))
    times = times[times > 0]
    values = rng.uniform(*value_range, size=times.size)
    return StepFunction(float(rng.uniform(*value_range)), tuple(times), tuple(values))


def sample_graph_points(f, count):
    """``count`` points spread along the completed graph by arclength;
    returns the points and the sampling pitch."""
    v = np.asarray(completed_graph(f).vertices)
    seg = np.hstack([v[:-1], v[1:]])
    lens = np.maximum(np.abs(seg[:, 2] - seg[:, 0]), np.abs(seg[:, 3] - seg[:, 1]))
    total = float(lens.sum())
    if total == 0.0:
        return np.repeat(v[:1], count, axis=0), 0.0
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    s = np.linspace(0.0, total, count)
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(lens) - 1)
    denom = np.where(lens[idx] > 0, lens[idx], 1.0)
    frac = np.where(lens[idx] > 0, (s - cum[idx]) / denom, 0.0)
    pts = np.empty((count, 2))
    pts[:, 0] = seg[idx, 0] + frac * (seg[idx, 2] - seg[idx, 0])
    pts[:, 1] = seg[idx, 1] + frac * (seg[idx, 3] - seg[idx, 1])
    return pts, total / (count - 1)


def brute_force_hausdorff(f, g, count=2000):
    """Two-sided Hausdorff distance between dense graph samplings.

    Independent of the production algorithm: pure point-set max-min
    under the coordinatewise-max plane metric.  The error against the
    true graph distance is at most the returned pitch.
    """
    pf, pitch_f = sample_graph_points(f, count)
    pg, pitch_g = sample_graph_points(g, count)
    diff_t = np.abs(pf[:, 0][:, None] - pg[:, 0][None, :])
    diff_z = np.abs(pf[:, 1][:, None] - pg[:, 1][None, :])
    d = np.maximum(diff_t, diff_z)
    value = max(float(d.min(axis=1).max()), float(d.min(axis=0).max()))
    return value, max(pitch_f, pitch_g)
