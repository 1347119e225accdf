"""Seeded synthetic signature datasets with genuine, skilled and random comparisons."""

from __future__ import annotations

import uuid
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import SynthSpec
from .ingest import (
    Comparison,
    ComparisonList,
    DatasetManifest,
    ManifestEntry,
    RawSignature,
    serialize_comparisons,
    serialize_manifest,
    serialize_signature,
)

SCALE = 1000.0  # device units per unit of the base trajectory


@dataclass
class Subject:
    index: int
    tool: str
    n_samples: int
    freqs: np.ndarray  # (2, 3)
    amps: np.ndarray
    phases: np.ndarray
    p_freq: float
    p_phase: float
    gap: tuple[float, float] | None

    def trajectory(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Base x, y and pressure at normalised times ``u`` in [0, 1]."""
        xy = []
        for axis in range(2):
            xy.append(sum(
                self.amps[axis, k] * np.sin(2 * np.pi * self.freqs[axis, k] * u + self.phases[axis, k])
                for k in range(3)
            ))
        p = 0.55 + 0.35 * np.sin(2 * np.pi * self.p_freq * u + self.p_phase)
        return xy[0], xy[1], p


def _subjects(spec: SynthSpec, rng: np.random.Generator) -> list[Subject]:
    n_finger = int(round(spec.finger_fraction * spec.subjects))
    out = []
    for k in range(spec.subjects):
        tool = "finger" if k >= spec.subjects - n_finger else "stylus"
        gap = None
        if tool == "stylus":
            start = rng.uniform(0.35, 0.6)
            gap = (start, start + rng.uniform(0.03, 0.06))
        out.append(Subject(
            index=k,
            tool=tool,
            n_samples=int(rng.integers(150, 251)),
            freqs=rng.uniform(0.5, 3.0, size=(2, 3)),
            amps=rng.uniform(0.3, 1.0, size=(2, 3)),
            phases=rng.uniform(0, 2 * np.pi, size=(2, 3)),
            p_freq=rng.uniform(0.5, 2.0),
            p_phase=rng.uniform(0, 2 * np.pi),
            gap=gap,
        ))
    return out


def _smooth_warp(u, amplitude, rng):
    """u + A sin(pi u) sin(pi k u + phase): fixed endpoints, displacement <= A."""
    k = int(rng.integers(1, 4))
    phase = rng.uniform(0, 2 * np.pi)
    # slope of the bump is at most A * pi * (k + 1); keep the warp monotone
    amplitude = min(amplitude, 0.9 / (np.pi * (k + 1)))
    return u + amplitude * np.sin(np.pi * u) * np.sin(np.pi * k * u + phase)


def _smooth_offset(u, amount, rng):
    f = rng.uniform(0.5, 2.0)
    return amount * np.sin(2 * np.pi * f * u + rng.uniform(0, 2 * np.pi))


def _render(subject: Subject, sid: str, u, x, y, p, spec: SynthSpec, label: str) -> RawSignature:
    n = len(u)
    t = np.arange(n) * (1000.0 / spec.sample_hz)
    meta = dict(
        input_tool=subject.tool,
        scenario="office" if subject.tool == "stylus" else "mobile",
        label=label,
    )
    x = np.round(x * SCALE, 3)
    y = np.round(y * SCALE, 3)
    if subject.tool == "finger":
        return RawSignature(sid, x, y, t, **meta)
    pen = np.ones(n, dtype=bool)
    if subject.gap is not None:
        pen &= ~((u >= subject.gap[0]) & (u < subject.gap[1]))
    p = np.where(pen, np.round(np.clip(p, 0.05, 1.0) * 1023), 0.0)
    return RawSignature(sid, x, y, t, p=p, pen_down=pen, **meta)


def _genuine(subject, sid, spec, rng):
    u = np.linspace(0.0, 1.0, subject.n_samples)
    x, y, p = subject.trajectory(u)
    if spec.genuine_jitter > 0:
        x = x + rng.normal(0, spec.genuine_jitter, u.shape)
        y = y + rng.normal(0, spec.genuine_jitter, u.shape)
        p = p + rng.normal(0, spec.genuine_jitter, u.shape)
    return _render(subject, sid, u, x, y, p, spec, "genuine")


def _skilled(subject, sid, spec, rng):
    # forgers are slower and imitate the shape under a smooth distortion
    n = int(round(subject.n_samples * rng.uniform(1.0, 1.4)))
    u = np.linspace(0.0, 1.0, n)
    strength = rng.uniform(0.2, 1.0)
    w = _smooth_warp(u, spec.forgery_warp * strength, rng)
    x, y, p = subject.trajectory(w)
    x = x + _smooth_offset(u, spec.forgery_amplitude * strength, rng)
    y = y + _smooth_offset(u, spec.forgery_amplitude * strength, rng)
    p = p + _smooth_offset(u, 2 * spec.forgery_amplitude * strength, rng)
    if spec.genuine_jitter > 0:
        x = x + rng.normal(0, spec.genuine_jitter, u.shape)
        y = y + rng.normal(0, spec.genuine_jitter, u.shape)
    return _render(subject, sid, u, x, y, p, spec, "skilled_forgery")


def generate(spec: SynthSpec):
    """Build the dataset in memory.

    Returns ``(signatures, tasks)`` where ``signatures`` maps id to
    RawSignature and ``tasks`` maps task number to a labelled
    ComparisonList.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)

    def new_id():
        return str(uuid.UUID(bytes=rng.bytes(16), version=4))

    subjects = _subjects(spec, rng)
    sigs: dict[str, RawSignature] = {}
    genuine_ids: dict[int, list[str]] = {}
    skilled_ids: dict[int, list[str]] = {}
    for subj in subjects:
        genuine_ids[subj.index] = []
        for _ in range(spec.genuine_per_subject):
            sid = new_id()
            sigs[sid] = _genuine(subj, sid, spec, rng)
            genuine_ids[subj.index].append(sid)
        skilled_ids[subj.index] = []
        for _ in range(spec.skilled_per_subject):
            sid = new_id()
            sigs[sid] = _skilled(subj, sid, spec, rng)
            skilled_ids[subj.index].append(sid)

    by_tool: dict[str, list[Comparison]] = {"stylus": [], "finger": []}
    for subj in subjects:
        ref, *probes = genuine_ids[subj.index]
        comps = [Comparison(ref, g, "genuine") for g in probes]
        comps += [Comparison(ref, f, "skilled_forgery") for f in skilled_ids[subj.index]]
        others = [o.index for o in subjects if o.tool == subj.tool and o.index != subj.index]
        n_random = min(spec.skilled_per_subject, len(others))
        for o in rng.choice(others, size=n_random, replace=False) if n_random else []:
            g = genuine_ids[int(o)][int(rng.integers(1, spec.genuine_per_subject))]
            comps.append(Comparison(ref, g, "random_forgery"))
        by_tool[subj.tool] += comps

    tasks: dict[int, ComparisonList] = {}
    for task, tool in ((1, "stylus"), (2, "finger")):
        comps = by_tool[tool]
        if comps:
            order = rng.permutation(len(comps))
            tasks[task] = ComparisonList(tuple(comps[i] for i in order))
    if 1 in tasks and 2 in tasks:
        m = min(len(tasks[1]), len(tasks[2]))
        pick1 = rng.choice(len(tasks[1]), size=m, replace=False)
        pick2 = rng.choice(len(tasks[2]), size=m, replace=False)
        mixed = [tasks[1][int(i)] for i in pick1] + [tasks[2][int(i)] for i in pick2]
        order = rng.permutation(len(mixed))
        tasks[3] = ComparisonList(tuple(mixed[i] for i in order))
    return sigs, tasks


def write_dataset(spec: SynthSpec, out_dir) -> DatasetManifest:
    """Write signatures, ``manifest.txt`` and ``task<k>.txt`` under ``out_dir``."""
    out_dir = Path(out_dir)
    sigs, tasks = generate(spec)
    (out_dir / "signatures").mkdir(parents=True, exist_ok=True)
    entries = {}
    for sid, sig in sigs.items():
        rel = f"signatures/{sid}.txt"
        (out_dir / rel).write_text(serialize_signature(sig), encoding="utf-8", newline="\n")
        entries[sid] = ManifestEntry(rel, sig.input_tool, sig.scenario, sig.label)
    task_files = {}
    for task, comps in tasks.items():
        rel = f"task{task}.txt"
        (out_dir / rel).write_text(serialize_comparisons(comps), encoding="utf-8", newline="\n")
        task_files[task] = rel
    manifest = DatasetManifest(entries, tasks, task_files, out_dir)
    (out_dir / "manifest.txt").write_text(serialize_manifest(manifest), encoding="utf-8", newline="\n")
    return manifest
