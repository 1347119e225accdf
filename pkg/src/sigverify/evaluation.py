"""FAR/FRR sweeps, EER, forgery breakdown and the points-based ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import FormatError, ValidationError

RECORD_LABELS = ("genuine", "skilled_forgery", "random_forgery")
FILTERS = {
    "all": ("skilled_forgery", "random_forgery"),
    "skilled_only": ("skilled_forgery",),
    "random_only": ("random_forgery",),
}
MEDAL_POINTS = (3, 2, 1)


@dataclass(frozen=True)
class ScoreRecord:
    score: float
    label: str

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValidationError(f"score must be finite, got {self.score}")
        if self.label not in RECORD_LABELS:
            raise ValidationError(f"unknown record label {self.label!r}")


def _split(records: Iterable[ScoreRecord], impostor_filter: str):
    if impostor_filter not in FILTERS:
        raise ValidationError(f"unknown impostor filter {impostor_filter!r}")
    wanted = FILTERS[impostor_filter]
    gen, imp = [], []
    for r in records:
        if r.label == "genuine":
            gen.append(r.score)
        elif r.label in wanted:
            imp.append(r.score)
    if not gen:
        raise ValidationError("no genuine records")
    if not imp:
        raise ValidationError(f"no impostor records for filter {impostor_filter!r}")
    return np.array(gen, dtype=float), np.array(imp, dtype=float)


def far_frr_curve(records: Sequence[ScoreRecord], impostor_filter: str = "all"):
    """DET points ``(threshold, far, frr)`` with accept iff score >= threshold.

    Thresholds are -inf, every distinct score in increasing order, and +inf.
    """
    gen, imp = _split(records, impostor_filter)
    gen.sort()
    imp.sort()
    thresholds = np.concatenate(([-np.inf], np.unique(np.concatenate((gen, imp))), [np.inf]))
    # rejected genuines: score < t ; accepted impostors: score >= t
    rejected = np.searchsorted(gen, thresholds, side="left")
    accepted = imp.size - np.searchsorted(imp, thresholds, side="left")
    far = accepted / imp.size
    frr = rejected / gen.size
    return list(zip(thresholds.tolist(), far.tolist(), frr.tolist()))


def crossing_rate(points) -> float:
    """FAR = FRR value along a monotone sweep, in [0, 1].

    Takes the first point where FRR >= FAR; if it is not an exact crossing,
    the segment from the previous point is intersected with FAR = FRR.
    """
    prev = None
    for _, far, frr in points:
        gap = frr - far
        if gap >= 0:
            if gap == 0 or prev is None:
                return far if gap == 0 else (far + frr) / 2
            pfar, pfrr = prev
            pgap = pfrr - pfar
            alpha = -pgap / (gap - pgap)
            return pfar + alpha * (far - pfar)
        prev = (far, frr)
    raise ValidationError("sweep never reaches FRR >= FAR")


def eer(records: Sequence[ScoreRecord], impostor_filter: str = "all") -> float:
    """Equal error rate in percent."""
    return 100.0 * crossing_rate(far_frr_curve(records, impostor_filter))


def forgery_breakdown(records: Sequence[ScoreRecord]) -> tuple[float, float]:
    labels = {r.label for r in records}
    for needed in ("skilled_forgery", "random_forgery"):
        if needed not in labels:
            raise ValidationError(f"no {needed} records for the breakdown")
    return eer(records, "skilled_only"), eer(records, "random_only")


@dataclass
class EvalReport:
    eer_overall: float
    eer_skilled: float | None
    eer_random: float | None
    det_points: dict[str, list]
    counts: dict[str, int]
    team: str | None = None

    def to_text(self) -> str:
        def pct(v):
            return "n/a" if v is None else f"{v:.2f}"

        lines = []
        if self.team is not None:
            lines.append(f"team={self.team}")
        lines += [
            f"eer_overall={pct(self.eer_overall)}",
            f"eer_skilled={pct(self.eer_skilled)}",
            f"eer_random={pct(self.eer_random)}",
        ]
        for label in RECORD_LABELS:
            lines.append(f"count_{label}={self.counts.get(label, 0)}")
        return "\n".join(lines) + "\n"


def evaluate(records: Sequence[ScoreRecord], team: str | None = None) -> EvalReport:
    counts = {label: 0 for label in RECORD_LABELS}
    for r in records:
        counts[r.label] += 1
    dets = {"all": far_frr_curve(records, "all")}
    overall = 100.0 * crossing_rate(dets["all"])
    sub = {}
    for name, filt in (("skilled", "skilled_only"), ("random", "random_only")):
        if counts[FILTERS[filt][0]]:
            dets[name] = far_frr_curve(records, filt)
            sub[name] = 100.0 * crossing_rate(dets[name])
        else:
            sub[name] = None
    return EvalReport(overall, sub["skilled"], sub["random"], dets, counts, team)


def det_csv(points) -> str:
    lines = ["threshold,far,frr"]
    for t, far, frr in points:
        lines.append(f"{t!r},{far!r},{frr!r}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict[str, str]:
    out = {}
    for k, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"report line {k}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


# -- ranking ----------------------------------------------------------------


@dataclass
class RankingTable:
    tasks: dict[int, list[tuple[str, float]]]
    task_points: dict[int, dict[str, int]]
    totals: dict[str, int]
    ties: list[tuple[int, tuple[str, ...]]] = field(default_factory=list)

    @property
    def order(self) -> list[str]:
        return sorted(self.totals, key=lambda t: (-self.totals[t], t))

    @property
    def winner(self) -> str:
        return self.order[0]

    def to_markdown(self) -> str:
        out = []
        for task in sorted(self.tasks):
            out.append(f"## Task {task}")
            out.append("")
            out.append("| Position | Team | EER (%) | Points |")
            out.append("|---|---|---|---|")
            for pos, (team, value) in enumerate(self.tasks[task], start=1):
                out.append(f"| {pos} | {team} | {value:.2f} | {self.task_points[task][team]} |")
            out.append("")
        out.append("## Global ranking")
        out.append("")
        out.append("| Position | Team | Total Points |")
        out.append("|---|---|---|")
        for pos, team in enumerate(self.order, start=1):
            out.append(f"| {pos} | {team} | {self.totals[team]} |")
        if self.ties:
            out.append("")
            out.append("Ties (broken by team id):")
            for task, teams in self.ties:
                out.append(f"- task {task}: {', '.join(teams)}")
        return "\n".join(out) + "\n"


def rank_teams(task_results: Mapping[int, Mapping[str, float]]) -> RankingTable:
    """Medal points per task (3/2/1 for the three lowest EERs) summed over tasks."""
    tasks, task_points, ties = {}, {}, []
    totals: dict[str, int] = {}
    for task in sorted(task_results):
        results = task_results[task]
        if not results:
            raise ValidationError(f"task {task} has no teams")
        ordered = sorted(results.items(), key=lambda kv: (kv[1], kv[0]))
        tasks[task] = ordered
        pts = {}
        for pos, (team, _) in enumerate(ordered):
            pts[team] = MEDAL_POINTS[pos] if pos < len(MEDAL_POINTS) else 0
            totals[team] = totals.get(team, 0) + pts[team]
        task_points[task] = pts
        by_value: dict[float, list[str]] = {}
        for team, value in ordered:
            by_value.setdefault(value, []).append(team)
        for teams in by_value.values():
            if len(teams) > 1:
                ties.append((task, tuple(teams)))
    return RankingTable(tasks, task_points, totals, ties)


def load_task_reports(directory) -> dict[int, dict[str, float]]:
    """Read ``<dir>/task<k>/<team>.txt`` reports into ``{task: {team: eer}}``.

    The team name is the report's ``team`` key when present, else the
    file stem.
    """
    directory = Path(directory)
    results: dict[int, dict[str, float]] = {}
    for sub in sorted(p for p in directory.iterdir() if p.is_dir()):
        name = sub.name.lower()
        if not name.startswith("task") or not name[4:].isdigit():
            continue
        task = int(name[4:])
        for report in sorted(sub.glob("*.txt")):
            kv = parse_report(report.read_text(encoding="utf-8"))
            if "eer_overall" not in kv:
                raise FormatError(f"{report}: missing eer_overall")
            try:
                value = float(kv["eer_overall"].rstrip("%"))
            except ValueError:
                raise FormatError(f"{report}: bad eer_overall {kv['eer_overall']!r}") from None
            results.setdefault(task, {})[kv.get("team", report.stem)] = value
    if not results:
        raise ValidationError(f"{directory}: no task<k>/ directories with reports")
    return results
