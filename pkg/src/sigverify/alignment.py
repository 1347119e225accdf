"""DTW, soft-DTW with its gradient, triplet loss and DTW pre-alignment."""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from .errors import ValidationError
from .features import TimeFunctionMatrix

METRICS = ("euclidean", "sq_euclidean")

_jit = dict(nogil=True, cache=True)


@dataclass(frozen=True)
class AlignmentResult:
    cumulative_cost: float
    path: tuple[tuple[int, int], ...]
    normalized_score: float

    @property
    def path_length(self) -> int:
        return len(self.path)


def _as_array(seq) -> np.ndarray:
    if isinstance(seq, TimeFunctionMatrix):
        return np.ascontiguousarray(seq.values)
    a = np.asarray(seq, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    return np.ascontiguousarray(a)


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(a, TimeFunctionMatrix) and isinstance(b, TimeFunctionMatrix):
        if a.names != b.names:
            raise ValidationError(f"channel mismatch: {a.names} vs {b.names}")
    x, y = _as_array(a), _as_array(b)
    if x.shape[1] != y.shape[1]:
        raise ValidationError(f"channel count mismatch: {x.shape[1]} vs {y.shape[1]}")
    if x.shape[0] == 0 or y.shape[0] == 0:
        raise ValidationError("cannot align an empty sequence")
    return x, y


def _metric_flag(metric: str) -> bool:
    if metric not in METRICS:
        raise ValidationError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return metric == "sq_euclidean"


@nb.njit(**_jit)
def _local_cost(x, y, squared):
    n, m, c = x.shape[0], y.shape[0], x.shape[1]
    d = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            s = 0.0
            for k in range(c):
                diff = x[i, k] - y[j, k]
                s += diff * diff
            d[i, j] = s if squared else np.sqrt(s)
    return d


def local_cost(a, b, metric: str = "euclidean") -> np.ndarray:
    """Pairwise channel-vector distance matrix, shape (len(a), len(b))."""
    x, y = _pair(a, b)
    return _local_cost(x, y, _metric_flag(metric))


@nb.njit(**_jit)
def _dtw_table(d):
    n, m = d.shape
    r = np.full((n + 1, m + 1), np.inf)
    r[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = r[i - 1, j - 1]
            if r[i - 1, j] < best:
                best = r[i - 1, j]
            if r[i, j - 1] < best:
                best = r[i, j - 1]
            r[i, j] = d[i - 1, j - 1] + best
    return r


@nb.njit(**_jit)
def _traceback(r):
    i, j = r.shape[0] - 1, r.shape[1] - 1
    out = np.empty((i + j, 2), dtype=np.int64)
    k = 0
    while True:
        out[k, 0] = i - 1
        out[k, 1] = j - 1
        k += 1
        if i == 1 and j == 1:
            break
        diag, up, left = r[i - 1, j - 1], r[i - 1, j], r[i, j - 1]
        # ties: diagonal, then (i-1, j), then (i, j-1)
        if diag <= up and diag <= left:
            i -= 1
            j -= 1
        elif up <= left:
            i -= 1
        else:
            j -= 1
    return out[:k][::-1]


def dtw(a, b, metric: str = "euclidean") -> AlignmentResult:
    """Classic DTW with the symmetric three-neighbour step pattern, no band.

    ``normalized_score`` is the cumulative cost divided by the number of
    pairs on the optimal warping path.
    """
    x, y = _pair(a, b)
    r = _dtw_table(_local_cost(x, y, _metric_flag(metric)))
    path = _traceback(r)
    cost = float(r[-1, -1])
    pairs = tuple((int(i), int(j)) for i, j in path)
    return AlignmentResult(cost, pairs, cost / len(pairs))


def dtw_cost(a, b, metric: str = "euclidean") -> float:
    x, y = _pair(a, b)
    return float(_dtw_table(_local_cost(x, y, _metric_flag(metric)))[-1, -1])


# -- soft-DTW ---------------------------------------------------------------


@nb.njit(**_jit)
def _softmin3(a, b, c, gamma):
    m = min(a, b, c)
    if m == np.inf:
        return np.inf
    s = np.exp(-(a - m) / gamma) + np.exp(-(b - m) / gamma) + np.exp(-(c - m) / gamma)
    return m - gamma * np.log(s)


@nb.njit(**_jit)
def _soft_table(d, gamma):
    n, m = d.shape
    r = np.full((n + 2, m + 2), np.inf)
    r[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            r[i, j] = d[i - 1, j - 1] + _softmin3(r[i - 1, j - 1], r[i - 1, j], r[i, j - 1], gamma)
    return r


@nb.njit(**_jit)
def _soft_alignment(d, r, gamma):
    # expected alignment matrix E = d value / d cost, backward recursion
    n, m = d.shape
    dd = np.zeros((n + 2, m + 2))
    dd[1:n + 1, 1:m + 1] = d
    rr = r.copy()
    for i in range(1, n + 1):
        rr[i, m + 1] = -np.inf
    for j in range(1, m + 1):
        rr[n + 1, j] = -np.inf
    rr[n + 1, m + 1] = rr[n, m]
    e = np.zeros((n + 2, m + 2))
    e[n + 1, m + 1] = 1.0
    for j in range(m, 0, -1):
        for i in range(n, 0, -1):
            wa = np.exp((rr[i + 1, j] - rr[i, j] - dd[i + 1, j]) / gamma)
            wb = np.exp((rr[i, j + 1] - rr[i, j] - dd[i, j + 1]) / gamma)
            wc = np.exp((rr[i + 1, j + 1] - rr[i, j] - dd[i + 1, j + 1]) / gamma)
            e[i, j] = e[i + 1, j] * wa + e[i, j + 1] * wb + e[i + 1, j + 1] * wc
    return e[1:n + 1, 1:m + 1]


def _check_gamma(gamma):
    if not gamma > 0:
        raise ValidationError(f"gamma must be positive, got {gamma}")


def soft_dtw(a, b, gamma: float = 1.0, metric: str = "sq_euclidean") -> float:
    """Soft-DTW value: DTW recursion with the hard min replaced by a log-sum-exp soft-min."""
    _check_gamma(gamma)
    x, y = _pair(a, b)
    d = _local_cost(x, y, _metric_flag(metric))
    return float(_soft_table(d, gamma)[x.shape[0], y.shape[0]])


def _cost_grads(x, y, e, metric):
    # chain rule through the local cost: returns (d value / dx, d value / dy)
    diff = x[:, None, :] - y[None, :, :]
    if metric == "sq_euclidean":
        w = 2.0 * e[:, :, None] * diff
    else:
        norm = np.sqrt((diff**2).sum(axis=2))
        scale = np.divide(e, norm, out=np.zeros_like(e), where=norm > 0)
        w = scale[:, :, None] * diff
    return w.sum(axis=1), -w.sum(axis=0)


def soft_dtw_value_and_grads(a, b, gamma: float = 1.0, metric: str = "sq_euclidean"):
    """Soft-DTW value with gradients with respect to both inputs."""
    _check_gamma(gamma)
    x, y = _pair(a, b)
    d = _local_cost(x, y, _metric_flag(metric))
    r = _soft_table(d, gamma)
    value = float(r[x.shape[0], y.shape[0]])
    e = _soft_alignment(d, r, gamma)
    ga, gb = _cost_grads(x, y, e, metric)
    return value, ga, gb


def soft_dtw_grad(a, b, gamma: float = 1.0, metric: str = "sq_euclidean") -> np.ndarray:
    """Gradient of ``soft_dtw(a, b)`` with respect to ``a`` (same shape as a)."""
    return soft_dtw_value_and_grads(a, b, gamma, metric)[1]


def soft_alignment_matrix(a, b, gamma: float = 1.0, metric: str = "sq_euclidean") -> np.ndarray:
    _check_gamma(gamma)
    x, y = _pair(a, b)
    d = _local_cost(x, y, _metric_flag(metric))
    return _soft_alignment(d, _soft_table(d, gamma), gamma)


def triplet_loss(anchor, positive, negative, margin: float = 1.0, gamma: float = 1.0,
                 metric: str = "sq_euclidean"):
    """Hinge triplet loss over soft-DTW distances.

    Returns ``(loss, (g_anchor, g_positive, g_negative))``; all gradients
    are zero when the hinge is inactive.
    """
    if margin < 0:
        raise ValidationError(f"margin must be nonnegative, got {margin}")
    _pair(anchor, positive)
    _pair(anchor, negative)
    d_ap, ga_p, gp = soft_dtw_value_and_grads(anchor, positive, gamma, metric)
    d_an, ga_n, gn = soft_dtw_value_and_grads(anchor, negative, gamma, metric)
    raw = margin + d_ap - d_an
    if raw <= 0:
        return 0.0, (np.zeros_like(ga_p), np.zeros_like(gp), np.zeros_like(gn))
    return raw, (ga_p - ga_n, gp, -gn)


def pre_align(a, b):
    """Expand both sequences along the optimal Euclidean DTW path.

    Both outputs have the path's length; row k is ``a[i_k]`` and ``b[j_k]``.
    """
    res = dtw(a, b, "euclidean")
    ia = np.array([i for i, _ in res.path])
    jb = np.array([j for _, j in res.path])
    if isinstance(a, TimeFunctionMatrix):
        return a.with_values(a.values[ia]), b.with_values(b.values[jb])
    return _as_array(a)[ia], _as_array(b)[jb]
