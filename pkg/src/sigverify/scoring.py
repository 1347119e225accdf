"""Score normalisation, fusion and threshold-based scorers."""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError

ORIENTATIONS = ("higher_is_genuine", "lower_is_genuine")
TANH_SLOPE = 0.01


def tanh_normalize(scores, mu: float, sigma: float) -> np.ndarray:
    """Hampel tanh-estimator mapping into (0, 1)."""
    if not sigma > 0:
        raise ValidationError(f"sigma must be positive, got {sigma}")
    s = np.asarray(scores, dtype=float)
    return 0.5 * (np.tanh(TANH_SLOPE * (s - mu) / sigma) + 1.0)


def estimate_tanh_params(genuine_scores) -> tuple[float, float]:
    """(mean, population std) of development genuine scores."""
    g = np.asarray(genuine_scores, dtype=float)
    if g.size < 2:
        raise ValidationError("need at least 2 genuine scores to estimate tanh parameters")
    sigma = float(g.std())
    if sigma == 0:
        raise ValidationError("genuine development scores have zero spread")
    return float(g.mean()), sigma


def fuse_weighted(scores, weights) -> float:
    s = np.asarray(scores, dtype=float)
    w = np.asarray(weights, dtype=float)
    if s.shape != w.shape or s.ndim != 1:
        raise ValidationError(f"{s.size} scores but {w.size} weights")
    if np.any(w < 0):
        raise ValidationError("fusion weights must be nonnegative")
    total = w.sum()
    if total <= 0:
        raise ValidationError("fusion weights sum to zero")
    return float(np.dot(w, s) / total)


def simplex_grid(n: int, step: float = 0.05):
    """All weight vectors on the simplex with the given step."""
    k = round(1.0 / step)
    if not np.isclose(k * step, 1.0):
        raise ValidationError(f"step {step} does not divide 1")
    for combo in itertools.product(range(k + 1), repeat=n - 1):
        rest = k - sum(combo)
        if rest >= 0:
            yield tuple(c / k for c in combo) + (rest / k,)


def grid_search_weights(streams: Sequence[Sequence[float]], objective: Callable[[np.ndarray], float],
                        step: float = 0.05) -> tuple[tuple[float, ...], float]:
    """Weights on the simplex grid minimising ``objective(fused_scores)``.

    ``streams`` is a list of per-comparison score sequences (one per
    matcher).  Ties keep the first grid point in lexicographic order.
    """
    mat = np.asarray(streams, dtype=float)
    best_w, best_v = None, np.inf
    for w in simplex_grid(mat.shape[0], step):
        if sum(w) == 0:
            continue
        fused = np.dot(w, mat) / sum(w)
        v = objective(fused)
        if v < best_v:
            best_w, best_v = w, v
    return best_w, best_v


def sigstat_local_score(d: float, g_th: float, f_th: float, s: float) -> float:
    """(s*f_th - d) / (s*f_th - g_th); 1 at d = g_th, 0 at d = s*f_th, unclamped."""
    denom = s * f_th - g_th
    if denom == 0:
        raise ValidationError("s * f_th equals g_th")
    return (s * f_th - d) / denom


def sigstat_global_score(d: float, d_g_min: float, d_f_med: float) -> float:
    """1 - (d_f_med - d) / (d_f_med - d_g_min), clamped to [0, 1].

    0 at or below the genuine minimum, 1 at or above the forgery median,
    so the output grows with the forgery likelihood.
    """
    if not d_f_med > d_g_min:
        raise ValidationError(f"d_f_med ({d_f_med}) must exceed d_g_min ({d_g_min})")
    if d <= d_g_min:
        return 0.0
    if d >= d_f_med:
        return 1.0
    return 1.0 - (d_f_med - d) / (d_f_med - d_g_min)


def sigstat_thresholds(genuine_d, forgery_d, s: float = 2.0) -> dict:
    """Starting-point parameters from development distances.

    g_th / f_th are the 5th / 50th percentiles of genuine / forgery
    distances; d_g_min / d_f_med are the genuine minimum and forgery median.
    """
    g = np.asarray(genuine_d, dtype=float)
    f = np.asarray(forgery_d, dtype=float)
    if g.size == 0 or f.size == 0:
        raise ValidationError("need genuine and forgery development distances")
    return {
        "g_th": float(np.percentile(g, 5)),
        "f_th": float(np.percentile(f, 50)),
        "s": s,
        "d_g_min": float(g.min()),
        "d_f_med": float(np.median(f)),
    }


def to_similarity(scores, orientation: str) -> np.ndarray:
    if orientation not in ORIENTATIONS:
        raise ValidationError(f"unknown orientation {orientation!r}")
    s = np.asarray(scores, dtype=float)
    return -s if orientation == "lower_is_genuine" else s.copy()
