"""Flat ``section.key = value`` configuration files.

Lines are ``key = value``; ``#`` starts a comment.  Lists are comma
separated.  Serialisation writes every key in a fixed order, so
parse -> serialise is idempotent.
"""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field

from .errors import FormatError, ValidationError


def parse_kv(text: str) -> dict[str, str]:
    out = {}
    for k, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"config line {k}: expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise FormatError(f"config line {k}: duplicate key {key!r}")
        out[key] = value
    return out


def _coerce(raw: str, hint, key: str):
    origin = typing.get_origin(hint)
    try:
        if hint is bool:
            if raw.lower() in ("true", "yes", "1"):
                return True
            if raw.lower() in ("false", "no", "0"):
                return False
            raise ValueError(raw)
        if hint is int:
            return int(raw)
        if hint is float:
            return float(raw)
        if hint is str:
            return raw
        if origin is tuple:
            inner = typing.get_args(hint)[0]
            if not raw:
                return ()
            return tuple(_coerce(tok.strip(), inner, key) for tok in raw.split(","))
        if origin is typing.Union:  # Optional[float]
            inner = [a for a in typing.get_args(hint) if a is not type(None)][0]
            return None if raw.lower() in ("", "none") else _coerce(raw, inner, key)
    except ValueError:
        raise ValidationError(f"config key {key!r}: cannot parse {raw!r}") from None
    raise TypeError(f"unsupported config type {hint}")


def _render(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_render(v) for v in value)
    return str(value)


def from_kv(cls, kv: dict[str, str], prefix: str = ""):
    """Build a (possibly nested) dataclass from flat dotted keys."""
    hints = typing.get_type_hints(cls)
    kwargs = {}
    for f in dataclasses.fields(cls):
        key = prefix + f.name
        hint = hints[f.name]
        if dataclasses.is_dataclass(hint):
            kwargs[f.name] = from_kv(hint, kv, key + ".")
        elif key in kv:
            kwargs[f.name] = _coerce(kv[key], hint, key)
    return cls(**kwargs)


def to_kv(obj, prefix: str = "") -> list[tuple[str, str]]:
    out = []
    for f in dataclasses.fields(obj):
        value = getattr(obj, f.name)
        if dataclasses.is_dataclass(value):
            out += to_kv(value, prefix + f.name + ".")
        else:
            out.append((prefix + f.name, _render(value)))
    return out


def known_keys(cls, prefix: str = "") -> set[str]:
    hints = typing.get_type_hints(cls)
    keys = set()
    for f in dataclasses.fields(cls):
        if dataclasses.is_dataclass(hints[f.name]):
            keys |= known_keys(hints[f.name], prefix + f.name + ".")
        else:
            keys.add(prefix + f.name)
    return keys


def load(cls, text: str):
    kv = parse_kv(text)
    unknown = sorted(set(kv) - known_keys(cls))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    obj = from_kv(cls, kv)
    if hasattr(obj, "validate"):
        obj.validate()
    return obj


def dump(obj) -> str:
    return "".join(f"{k} = {v}\n" for k, v in to_kv(obj))


# -- pipeline ---------------------------------------------------------------

PREPROCESS_STEPS = ("drop_zero_pressure", "resample_uniform", "scale_center")
EXTRACTORS = ("baseline", "dlvc12", "sig9", "mad13", "pathsig")
TIME_FUNCTION_EXTRACTORS = ("baseline", "dlvc12", "sig9")


@dataclass
class PreprocessConfig:
    steps: tuple[str, ...] = ()
    target_hz: float = 100.0
    scale_target: str = "unit_01"
    # drop_zero_pressure is skipped for signatures without pressure
    skip_missing_pressure: bool = True


@dataclass
class FeatureConfig:
    extractors: tuple[str, ...] = ("baseline",)
    znorm: bool = True
    finger_pressure: str = "constant_one"
    pathsig_depth: int = 2
    pathsig_full: bool = False


@dataclass
class MatcherConfig:
    name: str = "dtw"
    metric: str = "euclidean"
    gamma: float = 0.1
    # dtw: divide the cumulative cost by the warping-path length
    normalize: bool = True


@dataclass
class ScorerConfig:
    orientation: str = "lower_is_genuine"
    threshold: str = "none"
    g_th: float = 0.0
    f_th: float = 1.0
    s: float = 2.0
    d_g_min: float = 0.0
    d_f_med: float = 1.0
    normalization: str = "none"
    tanh_mu: tuple[float, ...] = ()
    tanh_sigma: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()


@dataclass
class PipelineConfig:
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    matcher: MatcherConfig = field(default_factory=MatcherConfig)
    scorer: ScorerConfig = field(default_factory=ScorerConfig)

    @property
    def n_streams(self) -> int:
        return len(self.features.extractors)

    def validate(self) -> None:
        p, f, m, s = self.preprocess, self.features, self.matcher, self.scorer
        for step in p.steps:
            if step not in PREPROCESS_STEPS:
                raise ValidationError(f"unknown preprocess step {step!r}")
        if p.target_hz <= 0:
            raise ValidationError("preprocess.target_hz must be positive")
        if p.scale_target not in ("unit_01", "sym_11"):
            raise ValidationError(f"unknown scale target {p.scale_target!r}")
        if not f.extractors:
            raise ValidationError("features.extractors is empty")
        for name in f.extractors:
            if name not in EXTRACTORS:
                raise ValidationError(f"unknown extractor {name!r}")
        if f.finger_pressure not in ("as_is", "constant_one"):
            raise ValidationError(f"unknown finger pressure policy {f.finger_pressure!r}")
        if not 1 <= f.pathsig_depth <= 4:
            raise ValidationError("features.pathsig_depth must be in 1..4")
        if m.name not in ("dtw", "softdtw"):
            raise ValidationError(f"unknown matcher {m.name!r}")
        if m.metric not in ("euclidean", "sq_euclidean"):
            raise ValidationError(f"unknown metric {m.metric!r}")
        if m.name == "softdtw" and not m.gamma > 0:
            raise ValidationError("matcher.gamma must be positive")
        if s.orientation not in ("higher_is_genuine", "lower_is_genuine"):
            raise ValidationError(f"unknown orientation {s.orientation!r}")
        if s.threshold not in ("none", "sigstat_local", "sigstat_global"):
            raise ValidationError(f"unknown threshold scorer {s.threshold!r}")
        if s.threshold == "sigstat_local" and s.s * s.f_th == s.g_th:
            raise ValidationError("scorer: s * f_th must differ from g_th")
        if s.threshold == "sigstat_global" and not s.d_f_med > s.d_g_min:
            raise ValidationError("scorer: d_f_med must exceed d_g_min")
        if s.normalization not in ("none", "tanh"):
            raise ValidationError(f"unknown normalization {s.normalization!r}")
        if s.normalization == "tanh":
            if len(s.tanh_mu) != self.n_streams or len(s.tanh_sigma) != self.n_streams:
                raise ValidationError("scorer.tanh_mu / tanh_sigma need one value per extractor")
            if any(not v > 0 for v in s.tanh_sigma):
                raise ValidationError("scorer.tanh_sigma values must be positive")
        if s.weights:
            if len(s.weights) != self.n_streams:
                raise ValidationError("scorer.weights needs one value per extractor")
            if any(w < 0 for w in s.weights) or sum(s.weights) <= 0:
                raise ValidationError("scorer.weights must be nonnegative with a positive sum")
        elif self.n_streams > 1:
            raise ValidationError("several extractors need scorer.weights")


@dataclass
class SynthSpec:
    subjects: int = 20
    genuine_per_subject: int = 8
    skilled_per_subject: int = 8
    seed: int = 0
    genuine_jitter: float = 0.0005
    forgery_warp: float = 0.06
    forgery_amplitude: float = 0.15
    finger_fraction: float = 0.5
    sample_hz: float = 100.0

    def validate(self) -> None:
        if self.subjects < 2:
            raise ValidationError("subjects must be >= 2")
        if self.genuine_per_subject < 2:
            raise ValidationError("genuine_per_subject must be >= 2")
        if self.skilled_per_subject < 1:
            raise ValidationError("skilled_per_subject must be >= 1")
        if self.genuine_jitter < 0:
            raise ValidationError("genuine_jitter must be nonnegative")
        if not self.genuine_jitter < self.forgery_warp:
            raise ValidationError("genuine_jitter must be smaller than forgery_warp")
        if not 0 <= self.finger_fraction <= 1:
            raise ValidationError("finger_fraction must be in [0, 1]")
        if self.sample_hz <= 0:
            raise ValidationError("sample_hz must be positive")
