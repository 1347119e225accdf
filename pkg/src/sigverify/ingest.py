"""Signature files, manifests, comparison lists and score files.

Canonical signature file::

    N
    X Y T [P [U]]      # N rows, whitespace separated

``T`` is in milliseconds, ``P`` is pressure and ``U`` is the pen-down flag
(0/1).  Optional columns must be present on every row or on none.
Acquisition metadata (tool, scenario, label) lives in the manifest::

    # comment
    <id> <path> <tool> <scenario> <label>
    @task <k> <comparison file>

Comparison files hold one ``reference_id probe_id [label]`` per line and
score files one ``%.6f`` score per line, in comparison order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, ValidationError

TOOLS = ("stylus", "finger")
SCENARIOS = ("office", "mobile")
LABELS = ("genuine", "skilled_forgery", "random_forgery", "unknown")
IMPOSTOR_LABELS = ("skilled_forgery", "random_forgery")


@dataclass(frozen=True)
class SignaturePoint:
    x: float
    y: float
    t: float
    p: float | None = None
    pen_down: bool | None = None


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class RawSignature:
    """One on-line signature stored column-wise.

    ``p`` and ``pen_down`` are either ``None`` or arrays of the same length
    as ``x``.  Arrays are read-only so instances can be shared freely.
    """

    id: str
    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    p: np.ndarray | None = None
    pen_down: np.ndarray | None = None
    input_tool: str = "stylus"
    scenario: str = "office"
    label: str = "unknown"

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "x", _frozen(self.x))
        set_(self, "y", _frozen(self.y))
        set_(self, "t", _frozen(self.t))
        n = self.x.shape[0]
        if self.x.ndim != 1 or self.y.shape != (n,) or self.t.shape != (n,):
            raise ValidationError(f"{self.id}: x, y, t must be 1-D arrays of equal length")
        if self.p is not None:
            set_(self, "p", _frozen(self.p))
            if self.p.shape != (n,):
                raise ValidationError(f"{self.id}: pressure length mismatch")
            if np.any(self.p < 0):
                raise ValidationError(f"{self.id}: negative pressure")
        if self.pen_down is not None:
            pd = np.array(self.pen_down, dtype=bool)
            pd.flags.writeable = False
            set_(self, "pen_down", pd)
            if pd.shape != (n,):
                raise ValidationError(f"{self.id}: pen_down length mismatch")
        if n < 2:
            raise ValidationError(f"{self.id}: a signature needs at least 2 points, got {n}")
        if np.any(np.diff(self.t) < 0):
            raise ValidationError(f"{self.id}: timestamps decrease")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y)) and np.all(np.isfinite(self.t))):
            raise ValidationError(f"{self.id}: non-finite coordinates or timestamps")
        if self.input_tool not in TOOLS:
            raise ValidationError(f"unknown input tool {self.input_tool!r}")
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}")
        if self.label not in LABELS:
            raise ValidationError(f"unknown label {self.label!r}")

    def __len__(self) -> int:
        return self.x.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RawSignature):
            return NotImplemented

        def same(a, b):
            if a is None or b is None:
                return a is None and b is None
            return np.array_equal(a, b)

        return (
            self.id == other.id
            and self.metadata() == other.metadata()
            and same(self.x, other.x)
            and same(self.y, other.y)
            and same(self.t, other.t)
            and same(self.p, other.p)
            and same(self.pen_down, other.pen_down)
        )

    __hash__ = None

    @property
    def has_pressure(self) -> bool:
        return self.p is not None

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    @property
    def points(self) -> list[SignaturePoint]:
        out = []
        for k in range(len(self)):
            out.append(
                SignaturePoint(
                    float(self.x[k]),
                    float(self.y[k]),
                    float(self.t[k]),
                    None if self.p is None else float(self.p[k]),
                    None if self.pen_down is None else bool(self.pen_down[k]),
                )
            )
        return out

    def metadata(self) -> dict:
        return {"input_tool": self.input_tool, "scenario": self.scenario, "label": self.label}

    def replace(self, **changes) -> "RawSignature":
        kw = dict(
            id=self.id, x=self.x, y=self.y, t=self.t, p=self.p, pen_down=self.pen_down,
            input_tool=self.input_tool, scenario=self.scenario, label=self.label,
        )
        kw.update(changes)
        return RawSignature(**kw)

    def take(self, index) -> "RawSignature":
        """Subset of samples selected by an index array or boolean mask."""
        return self.replace(
            x=self.x[index],
            y=self.y[index],
            t=self.t[index],
            p=None if self.p is None else self.p[index],
            pen_down=None if self.pen_down is None else self.pen_down[index],
        )

    @classmethod
    def from_points(cls, id: str, points: Sequence[SignaturePoint], **metadata) -> "RawSignature":
        has_p = {pt.p is not None for pt in points}
        has_u = {pt.pen_down is not None for pt in points}
        if len(has_p) > 1 or len(has_u) > 1:
            raise ValidationError(f"{id}: optional fields must be present on all points or none")
        return cls(
            id=id,
            x=[pt.x for pt in points],
            y=[pt.y for pt in points],
            t=[pt.t for pt in points],
            p=[pt.p for pt in points] if has_p == {True} else None,
            pen_down=[pt.pen_down for pt in points] if has_u == {True} else None,
            **metadata,
        )


def _float(tok: str, where: str) -> float:
    # float() accepts "1_0", "nan", "inf"; the format allows plain decimals only
    if "_" in tok or "," in tok:
        raise FormatError(f"{where}: bad number {tok!r}")
    try:
        v = float(tok)
    except ValueError:
        raise FormatError(f"{where}: bad number {tok!r}") from None
    if not math.isfinite(v):
        raise FormatError(f"{where}: non-finite value {tok!r}")
    return v


def parse_signature(text: str, id: str, metadata: dict | None = None) -> RawSignature:
    """Parse a canonical signature file; timestamps are shifted so t[0] = 0."""
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise FormatError(f"{id}: empty signature file")
    try:
        n = int(lines[0])
    except ValueError:
        raise FormatError(f"{id}: header must be the point count, got {lines[0]!r}") from None
    rows = lines[1:]
    if n != len(rows):
        raise FormatError(f"{id}: header says {n} points but file has {len(rows)} rows")
    if n < 2:
        raise ValidationError(f"{id}: a signature needs at least 2 points, got {n}")
    width = None
    table = []
    for k, row in enumerate(rows, start=2):
        toks = row.split()
        if width is None:
            width = len(toks)
            if width not in (3, 4, 5):
                raise FormatError(f"{id}: line {k}: expected 3 to 5 columns, got {width}")
        elif len(toks) != width:
            raise FormatError(f"{id}: line {k}: expected {width} columns, got {len(toks)}")
        table.append([_float(tok, f"{id}: line {k}") for tok in toks])
    arr = np.array(table)
    t = arr[:, 2]
    if np.any(np.diff(t) < 0):
        raise ValidationError(f"{id}: timestamps decrease")
    pen_down = None
    if width == 5:
        u = arr[:, 4]
        if not np.all((u == 0) | (u == 1)):
            raise FormatError(f"{id}: pen-down column must be 0 or 1")
        pen_down = u.astype(bool)
    return RawSignature(
        id=id,
        x=arr[:, 0],
        y=arr[:, 1],
        t=t - t[0],
        p=arr[:, 3] if width >= 4 else None,
        pen_down=pen_down,
        **(metadata or {}),
    )


def _num(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def serialize_signature(sig: RawSignature) -> str:
    cols = [sig.x, sig.y, sig.t]
    if sig.p is not None:
        cols.append(sig.p)
    elif sig.pen_down is not None:
        raise ValidationError(f"{sig.id}: canonical format needs a P column before U")
    lines = [str(len(sig))]
    for k in range(len(sig)):
        row = [_num(c[k]) for c in cols]
        if sig.pen_down is not None:
            row.append("1" if sig.pen_down[k] else "0")
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def read_signature(path, id: str | None = None, metadata: dict | None = None) -> RawSignature:
    path = Path(path)
    return parse_signature(path.read_text(encoding="utf-8"), id or path.stem, metadata)


def write_signature(path, sig: RawSignature) -> None:
    Path(path).write_text(serialize_signature(sig), encoding="utf-8", newline="\n")


# -- comparisons ------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    reference_id: str
    probe_id: str
    expected: str | None = None


@dataclass(frozen=True)
class ComparisonList:
    entries: tuple[Comparison, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    @property
    def ids(self) -> set[str]:
        return {e.reference_id for e in self.entries} | {e.probe_id for e in self.entries}


def parse_comparisons(text: str) -> ComparisonList:
    entries = []
    for k, line in enumerate(text.splitlines(), start=1):
        toks = line.split()
        if not toks:
            continue
        if len(toks) not in (2, 3):
            raise FormatError(f"comparisons line {k}: expected 'reference probe [label]', got {line!r}")
        label = None
        if len(toks) == 3:
            label = toks[2]
            if label not in LABELS:
                raise ValidationError(f"comparisons line {k}: unknown label {label!r}")
            if label == "unknown":
                label = None
        entries.append(Comparison(toks[0], toks[1], label))
    if not entries:
        raise ValidationError("comparison file is empty")
    return ComparisonList(tuple(entries))


def serialize_comparisons(comparisons: Iterable[Comparison], with_labels: bool = True) -> str:
    lines = []
    for c in comparisons:
        toks = [c.reference_id, c.probe_id]
        if with_labels and c.expected is not None:
            toks.append(c.expected)
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


# -- scores -----------------------------------------------------------------


def write_scores(scores: Iterable[float]) -> str:
    out = []
    for k, s in enumerate(scores):
        s = float(s)
        if not math.isfinite(s):
            raise ValidationError(f"score {k} is not finite: {s}")
        out.append(f"{s:.6f}\n")
    return "".join(out)


def parse_scores(text: str) -> list[float]:
    scores = []
    for k, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        scores.append(_float(line, f"scores line {k}"))
    return scores


# -- manifest ---------------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    input_tool: str = "stylus"
    scenario: str = "office"
    label: str = "unknown"

    def metadata(self) -> dict:
        return {"input_tool": self.input_tool, "scenario": self.scenario, "label": self.label}


@dataclass
class DatasetManifest:
    """Signature index plus optional per-task comparison lists.

    Relative paths resolve against ``root`` (the manifest's directory when
    loaded from disk).
    """

    signatures: dict[str, ManifestEntry]
    tasks: dict[int, ComparisonList] = field(default_factory=dict)
    task_files: dict[int, str] = field(default_factory=dict)
    root: Path = field(default_factory=Path)

    def __post_init__(self):
        for task, comps in self.tasks.items():
            self.check(comps, f"task {task}")

    def check(self, comparisons: ComparisonList, what: str = "comparisons") -> None:
        for k, c in enumerate(comparisons, start=1):
            for sid in (c.reference_id, c.probe_id):
                if sid not in self.signatures:
                    raise ValidationError(f"{what} line {k}: unknown signature id {sid!r}")

    def path_of(self, sid: str) -> Path:
        return self.root / self.signatures[sid].path

    def load(self, sid: str) -> RawSignature:
        if sid not in self.signatures:
            raise ValidationError(f"unknown signature id {sid!r}")
        return read_signature(self.path_of(sid), sid, self.signatures[sid].metadata())


def parse_manifest(text: str, root=".", load_tasks: bool = True) -> DatasetManifest:
    root = Path(root)
    sigs: dict[str, ManifestEntry] = {}
    task_files: dict[int, str] = {}
    for k, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "@task":
            if len(toks) != 3 or toks[1] not in ("1", "2", "3"):
                raise FormatError(f"manifest line {k}: expected '@task <1|2|3> <path>'")
            task_files[int(toks[1])] = toks[2]
            continue
        if len(toks) != 5:
            raise FormatError(f"manifest line {k}: expected 'id path tool scenario label', got {len(toks)} fields")
        sid, path, tool, scenario, label = toks
        if sid in sigs:
            raise ValidationError(f"manifest line {k}: duplicate id {sid!r}")
        if tool not in TOOLS or scenario not in SCENARIOS or label not in LABELS:
            raise ValidationError(f"manifest line {k}: bad metadata {tool!r} {scenario!r} {label!r}")
        sigs[sid] = ManifestEntry(path, tool, scenario, label)
    tasks = {}
    if load_tasks:
        for task, rel in task_files.items():
            tasks[task] = parse_comparisons((root / rel).read_text(encoding="utf-8"))
    return DatasetManifest(sigs, tasks, task_files, root)


def read_manifest(path) -> DatasetManifest:
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), root=path.parent)


def serialize_manifest(manifest: DatasetManifest) -> str:
    lines = []
    for sid, e in manifest.signatures.items():
        lines.append(f"{sid} {e.path} {e.input_tool} {e.scenario} {e.label}")
    for task in sorted(manifest.task_files):
        lines.append(f"@task {task} {manifest.task_files[task]}")
    return "\n".join(lines) + "\n"
