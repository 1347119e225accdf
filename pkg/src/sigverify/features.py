"""Time-function and global feature extractors."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, ValidationError
from .ingest import RawSignature

EPS = 1e-8


@dataclass(frozen=True, eq=False)
class TimeFunctionMatrix:
    """N x C matrix of per-sample channels with names and sample period (ms)."""

    names: tuple[str, ...]
    values: np.ndarray
    sample_period: float = 1.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[1] != len(self.names):
            raise ValidationError(f"values shape {v.shape} does not match {len(self.names)} channel names")
        if len(set(self.names)) != len(self.names):
            raise ValidationError(f"duplicate channel names in {self.names}")
        if v.shape[0] < 1:
            raise ValidationError("time-function matrix has no samples")
        if not np.all(np.isfinite(v)):
            raise ValidationError("time-function matrix contains NaN or inf")
        v.flags.writeable = False
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def channels(self) -> list[tuple[str, np.ndarray]]:
        return [(n, self.values[:, k]) for k, n in enumerate(self.names)]

    def channel(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    def with_values(self, values) -> "TimeFunctionMatrix":
        return TimeFunctionMatrix(self.names, values, self.sample_period)

    @classmethod
    def from_channels(cls, channels: Sequence[tuple[str, np.ndarray]], sample_period: float = 1.0):
        names = [n for n, _ in channels]
        lengths = {len(v) for _, v in channels}
        if len(lengths) != 1:
            raise ValidationError(f"channels have different lengths: {sorted(lengths)}")
        return cls(tuple(names), np.column_stack([v for _, v in channels]), sample_period)


@dataclass(frozen=True, eq=False)
class GlobalFeatureVector:
    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.shape[0] != len(self.names):
            raise ValidationError("feature names and values differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValidationError("feature names must be unique")
        if not np.all(np.isfinite(v)):
            raise ValidationError("feature vector contains NaN or inf")
        v.flags.writeable = False
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def entries(self) -> list[tuple[str, float]]:
        return list(zip(self.names, self.values.tolist()))

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])


def derivative(series, sample_period: float) -> np.ndarray:
    """Backward difference with ``out[0] = 0``; output has the input's length."""
    if sample_period <= 0:
        raise ValidationError(f"sample_period must be positive, got {sample_period}")
    s = np.asarray(series, dtype=float)
    if s.shape[0] < 2:
        raise ValidationError("derivative needs at least 2 samples")
    out = np.zeros_like(s)
    out[1:] = (s[1:] - s[:-1]) / sample_period
    return out


def wrapped_derivative(angle, sample_period: float) -> np.ndarray:
    """Backward difference of an angle, with each step wrapped into (-pi, pi]."""
    d = derivative(angle, 1.0)
    d = np.pi - np.mod(np.pi - d, 2 * np.pi)
    return d / sample_period


def sample_period(sig: RawSignature) -> float:
    """Mean sampling period in ms (1.0 for signatures without usable timing)."""
    period = sig.duration / (len(sig) - 1)
    return period if period > 0 else 1.0


def tangent_angle(dx, dy) -> np.ndarray:
    """atan2 angle; samples with no motion carry the previous angle (0 at start)."""
    theta = np.arctan2(dy, dx)
    still = (dx == 0) & (dy == 0)
    if still.any():
        # forward fill: index of the last moving sample at or before n
        idx = np.where(~still, np.arange(len(theta)), -1)
        idx = np.maximum.accumulate(idx)
        theta = np.where(idx >= 0, theta[np.maximum(idx, 0)], 0.0)
    return theta


def _require(sig: RawSignature, n: int = 3):
    if len(sig) < n:
        raise DegenerateInputError(f"{sig.id}: needs at least {n} samples, got {len(sig)}")


def extract_dlvc12(sig: RawSignature, period: float | None = None) -> TimeFunctionMatrix:
    """The 12 DSDTW time functions; missing pressure becomes a constant 1.0 channel."""
    _require(sig)
    T = sample_period(sig) if period is None else period
    dx = derivative(sig.x, T)
    dy = derivative(sig.y, T)
    v = np.hypot(dx, dy)
    theta = tangent_angle(dx, dy)
    z = sig.p if sig.p is not None else np.ones(len(sig))
    dv = derivative(v, T)
    dtheta = wrapped_derivative(theta, T)
    ratio = v / np.maximum(np.abs(dtheta), EPS)
    rho = np.log(np.maximum(ratio, EPS))
    c = v * dtheta
    a = np.sqrt(dv**2 + c**2)
    return TimeFunctionMatrix.from_channels(
        [
            ("x_dot", dx), ("y_dot", dy), ("v", v), ("theta", theta),
            ("cos_theta", np.cos(theta)), ("sin_theta", np.sin(theta)), ("z", z),
            ("v_dot", dv), ("theta_dot", dtheta), ("rho", rho), ("c", c), ("a", a),
        ],
        T,
    )


def speed_ratio(v, window: int = 5) -> np.ndarray:
    """min/max of v over the trailing window.

    v[0] is the zero padding of the backward difference, so windows start
    at index 1; the max is clamped below by EPS.
    """
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    out[0] = v[0] / max(v[0], EPS)
    for n in range(1, len(v)):
        w = v[max(1, n - window + 1): n + 1]
        out[n] = w.min() / max(w.max(), EPS)
    return out


def extract_sig9(sig: RawSignature, period: float | None = None) -> TimeFunctionMatrix:
    """Nine SFFS-selected time functions; eight when pressure (and so z_dot) is absent."""
    _require(sig)
    T = sample_period(sig) if period is None else period
    dx = derivative(sig.x, T)
    dy = derivative(sig.y, T)
    v = np.hypot(dx, dy)
    big_theta = tangent_angle(dx, dy)
    # angle of consecutive samples, from raw coordinate steps
    alpha = tangent_angle(derivative(sig.x, 1.0), derivative(sig.y, 1.0))
    channels = [("x", sig.x), ("y", sig.y), ("v", v)]
    if sig.p is not None:
        channels.append(("z_dot", derivative(sig.p, T)))
    channels += [
        ("v_dot", derivative(v, T)),
        ("Theta_dot", wrapped_derivative(big_theta, T)),
        ("v5_ratio", speed_ratio(v)),
        ("alpha_dot", wrapped_derivative(alpha, T)),
        ("cos_alpha", np.cos(alpha)),
    ]
    return TimeFunctionMatrix.from_channels(channels, T)


def extract_baseline(sig: RawSignature, period: float | None = None) -> TimeFunctionMatrix:
    """x, y and their first- and second-order derivatives."""
    _require(sig)
    T = sample_period(sig) if period is None else period
    dx = derivative(sig.x, T)
    dy = derivative(sig.y, T)
    return TimeFunctionMatrix.from_channels(
        [("x", sig.x), ("y", sig.y), ("x_dot", dx), ("y_dot", dy),
         ("x_ddot", derivative(dx, T)), ("y_ddot", derivative(dy, T))],
        T,
    )


def znorm_channels(tfm: TimeFunctionMatrix, pressure_policy: str = "as_is",
                   pressure_channel: str = "z") -> TimeFunctionMatrix:
    """Per-channel z-score with population variance; constant channels become zeros.

    Under ``constant_one`` the pressure channel is set to 1.0 instead.
    """
    if pressure_policy not in ("as_is", "constant_one"):
        raise ValidationError(f"unknown pressure policy {pressure_policy!r}")
    if len(tfm) < 2:
        raise ValidationError("z-normalisation needs at least 2 samples per channel")
    v = tfm.values
    mean = v.mean(axis=0)
    std = v.std(axis=0)
    flat = std == 0
    out = (v - mean) / np.where(flat, 1.0, std)
    out[:, flat] = 0.0
    if pressure_policy == "constant_one" and pressure_channel in tfm.names:
        out[:, tfm.names.index(pressure_channel)] = 1.0
    return tfm.with_values(out)


# -- global features --------------------------------------------------------

MAD13_NAMES = (
    "n_steps",
    "frac_x_pos", "frac_x_neg", "frac_y_pos", "frac_y_neg",
    "mean_x", "mean_y", "median_x", "median_y",
    "std_x", "std_y", "skew_x", "skew_y",
)


def skewness(v) -> float:
    """Population skewness m3 / m2**1.5; 0 for a constant series."""
    v = np.asarray(v, dtype=float)
    if np.all(v == v[0]):
        return 0.0
    d = v - v.mean()
    m2 = np.mean(d**2)
    if m2 == 0:
        return 0.0
    return float(np.mean(d**3) / m2**1.5)


def extract_mad13(sig: RawSignature) -> GlobalFeatureVector:
    x, y = sig.x, sig.y
    n = len(sig)
    vals = [
        n,
        np.count_nonzero(x > 0) / n, np.count_nonzero(x < 0) / n,
        np.count_nonzero(y > 0) / n, np.count_nonzero(y < 0) / n,
        x.mean(), y.mean(), np.median(x), np.median(y),
        x.std(), y.std(), skewness(x), skewness(y),
    ]
    return GlobalFeatureVector(MAD13_NAMES, vals)


def feature_diff(f_enrolled: GlobalFeatureVector, f_test: GlobalFeatureVector) -> GlobalFeatureVector:
    if f_enrolled.names != f_test.names:
        raise ValidationError("feature vectors have different names")
    return GlobalFeatureVector(f_enrolled.names, np.abs(f_enrolled.values - f_test.values))


def features_to_csv(rows: Sequence[tuple[str, GlobalFeatureVector]]) -> str:
    """One row per signature: ``id`` followed by the feature columns."""
    if not rows:
        return ""
    names = rows[0][1].names
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("id",) + names)
    for sid, fv in rows:
        if fv.names != names:
            raise ValidationError(f"{sid}: feature names differ from the first row")
        w.writerow([sid] + [repr(float(v)) for v in fv.values])
    return buf.getvalue()
