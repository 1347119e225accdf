"""Truncated signatures of piecewise-linear paths."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .features import GlobalFeatureVector, derivative, sample_period
from .ingest import RawSignature

MAX_DEPTH = 4


def signature_dim(d: int, depth: int) -> int:
    return sum(d**k for k in range(1, depth + 1))


def _split(flat, d, depth):
    levels, pos = [], 0
    for k in range(1, depth + 1):
        n = d**k
        levels.append(np.asarray(flat[pos: pos + n]).reshape((d,) * k))
        pos += n
    return levels


def _join(levels):
    return np.concatenate([lv.reshape(-1) for lv in levels])


def _segment_levels(delta, depth):
    levels = [delta]
    for k in range(2, depth + 1):
        levels.append(np.multiply.outer(levels[-1], delta) / k)
    return levels


def _chen(a, b, depth):
    out = []
    for k in range(1, depth + 1):
        acc = a[k - 1] + b[k - 1]
        for i in range(1, k):
            acc = acc + np.multiply.outer(a[i - 1], b[k - i - 1])
        out.append(acc)
    return out


def chen_product(sig_a, sig_b, d: int, depth: int) -> np.ndarray:
    """Truncated tensor product of two flat signatures (concatenation of paths)."""
    return _join(_chen(_split(sig_a, d, depth), _split(sig_b, d, depth), depth))


def path_signature(path, depth: int) -> np.ndarray:
    """Levels 1..depth of the signature of the piecewise-linear path (N x d).

    Output length is d + d^2 + ... + d^depth, each level flattened in
    row-major order of its multi-index.
    """
    path = np.asarray(path, dtype=float)
    if path.ndim == 1:
        path = path[:, None]
    if path.ndim != 2 or path.shape[0] < 2 or path.shape[1] < 1:
        raise ValidationError(f"path must be N x d with N >= 2, got shape {path.shape}")
    if not 1 <= depth <= MAX_DEPTH:
        raise ValidationError(f"unsupported depth {depth}; allowed 1..{MAX_DEPTH}")
    steps = np.diff(path, axis=0)
    levels = _segment_levels(steps[0], depth)
    for delta in steps[1:]:
        levels = _chen(levels, _segment_levels(delta, depth), depth)
    # level 1 telescopes; take it directly so it carries no summation error
    levels[0] = path[-1] - path[0]
    return _join(levels)


def mad_path(sig: RawSignature, full: bool = False) -> np.ndarray:
    """Path channels (x, y, x', y', p), plus the perpendicular (-y', x') when ``full``.

    Missing pressure is replaced by ones.
    """
    T = sample_period(sig)
    dx = derivative(sig.x, T)
    dy = derivative(sig.y, T)
    p = sig.p if sig.p is not None else np.ones(len(sig))
    cols = [sig.x, sig.y, dx, dy, p]
    if full:
        cols += [-dy, dx]
    return np.column_stack(cols)


def extract_pathsig(sig: RawSignature, depth: int = 2, full: bool = False) -> GlobalFeatureVector:
    path = mad_path(sig, full)
    values = path_signature(path, depth)
    d = path.shape[1]
    names = []
    for k in range(1, depth + 1):
        for idx in np.ndindex(*(d,) * k):
            names.append("S" + "_".join(str(i) for i in idx))
    return GlobalFeatureVector(tuple(names), values)

