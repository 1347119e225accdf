"""Per-signature preprocessing: resampling, pressure cleanup, scaling."""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, ValidationError
from .ingest import RawSignature


def resample_uniform(sig: RawSignature, target_hz: float = 100.0) -> RawSignature:
    """Linearly resample onto the grid ``0, T, 2T, ...`` with ``T = 1000/target_hz`` ms.

    The grid stops at the last multiple of ``T`` not beyond the final
    timestamp.  Pen-up gaps are interpolated through.  ``pen_down`` takes
    the value of the nearest earlier original sample.
    """
    if target_hz <= 0:
        raise ValidationError(f"target_hz must be positive, got {target_hz}")
    t = sig.t - sig.t[0]
    duration = t[-1]
    if duration <= 0:
        raise DegenerateInputError(f"{sig.id}: all timestamps are equal")
    step = 1000.0 / target_hz
    count = int(np.floor(duration / step + 1e-9)) + 1
    if count < 2:
        raise DegenerateInputError(f"{sig.id}: duration {duration} ms is shorter than one output period")
    grid = np.arange(count) * step

    # repeated timestamps: keep the last sample recorded at each instant
    keep = np.append(np.diff(t) > 0, True)
    tk = t[keep]

    def interp(v):
        return np.interp(grid, tk, v[keep])

    pen_down = None
    if sig.pen_down is not None:
        idx = np.searchsorted(t, grid, side="right") - 1
        pen_down = sig.pen_down[np.clip(idx, 0, len(t) - 1)]
    return sig.replace(
        x=interp(sig.x),
        y=interp(sig.y),
        t=grid,
        p=None if sig.p is None else interp(sig.p),
        pen_down=pen_down,
    )


def drop_zero_pressure(sig: RawSignature) -> RawSignature:
    if sig.p is None:
        raise ValidationError(f"{sig.id}: signature carries no pressure")
    mask = sig.p > 0
    if mask.sum() == 0:
        raise DegenerateInputError(f"{sig.id}: every sample has zero pressure")
    if mask.sum() == 1:
        raise DegenerateInputError(f"{sig.id}: only one sample with nonzero pressure")
    if mask.all():
        return sig
    return sig.take(mask)


def _minmax(v, lo, hi, name, sid, strict=True):
    vmin, vmax = v.min(), v.max()
    if vmax == vmin:
        if strict:
            raise DegenerateInputError(f"{sid}: {name} has zero range")
        return np.full_like(v, lo)
    return lo + (hi - lo) * (v - vmin) / (vmax - vmin)


def scale_center(sig: RawSignature, target: str = "unit_01", require_pressure: bool = False) -> RawSignature:
    """Min-max scale the coordinates (and pressure).

    ``unit_01``: x, y and p scaled to [0, 1], then x and y shifted by their
    mean.  ``sym_11``: x, y scaled to [-1, 1] and p to [0, 1].  Constant
    pressure maps to zeros.  With ``require_pressure`` a missing pressure
    channel is replaced by ones.
    """
    if target == "unit_01":
        x = _minmax(sig.x, 0.0, 1.0, "x", sig.id)
        y = _minmax(sig.y, 0.0, 1.0, "y", sig.id)
        x = x - x.mean()
        y = y - y.mean()
    elif target == "sym_11":
        x = _minmax(sig.x, -1.0, 1.0, "x", sig.id)
        y = _minmax(sig.y, -1.0, 1.0, "y", sig.id)
    else:
        raise ValidationError(f"unknown scale target {target!r}")
    if sig.p is not None:
        p = _minmax(sig.p, 0.0, 1.0, "p", sig.id, strict=False)
    elif require_pressure:
        p = np.ones(len(sig))
    else:
        p = None
    return sig.replace(x=x, y=y, p=p)


STEPS = {
    "resample_uniform": resample_uniform,
    "drop_zero_pressure": drop_zero_pressure,
    "scale_center": scale_center,
}
