"""Command-line entry point.

Exit codes: 0 success, 2 validation/format error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import config as cfg
from .convert import CONVERTERS, convert
from .errors import ValidationError
from .evaluation import ScoreRecord, det_csv, evaluate, load_task_reports, rank_teams
from .ingest import parse_comparisons, parse_scores, read_manifest, serialize_signature, write_scores
from .pipeline import Pipeline
from .scoring import to_similarity
from .synth import write_dataset

log = logging.getLogger("sigverify")

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 2, 3


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def cmd_convert(args) -> None:
    src = Path(args.input)
    sig = convert(_read(src), args.id or src.stem, args.layout)
    _write(args.out, serialize_signature(sig))
    log.info("wrote %s (%d points)", args.out, len(sig))


def cmd_compare(args) -> None:
    pipe = Pipeline(cfg.load(cfg.PipelineConfig, _read(args.config)))
    manifest = read_manifest(args.manifest)
    comparisons = parse_comparisons(_read(args.comparisons))
    scores = pipe.score_comparisons(manifest, comparisons, workers=args.workers)
    _write(args.out, write_scores(scores))
    log.info("scored %d comparisons -> %s", len(scores), args.out)


def cmd_eval(args) -> None:
    scores = parse_scores(_read(args.scores))
    truth = parse_comparisons(_read(args.comparisons))
    if len(scores) != len(truth):
        raise ValidationError(f"score file has {len(scores)} lines but comparison file has {len(truth)}")
    scores = to_similarity(scores, args.orientation)
    records = []
    for k, (s, c) in enumerate(zip(scores, truth), start=1):
        if c.expected is None:
            raise ValidationError(f"comparisons line {k}: ground-truth label missing")
        records.append(ScoreRecord(float(s), c.expected))
    report = evaluate(records, team=args.team)
    out = Path(args.out)
    _write(out / "report.txt", report.to_text())
    for name, points in report.det_points.items():
        _write(out / f"det_{name}.csv", det_csv(points))
    sys.stdout.write(report.to_text())


def cmd_rank(args) -> None:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"{directory} is not a directory")
    table = rank_teams(load_task_reports(directory))
    text = table.to_markdown()
    if args.out:
        _write(args.out, text)
    sys.stdout.write(text)


def cmd_synth(args) -> None:
    spec = cfg.load(cfg.SynthSpec, _read(args.config)) if args.config else cfg.SynthSpec()
    if args.seed is not None:
        spec.seed = args.seed
        spec.validate()
    manifest = write_dataset(spec, args.out)
    _write(Path(args.out) / "synth.cfg", cfg.dump(spec))
    log.info("wrote %d signatures and tasks %s to %s",
             len(manifest.signatures), sorted(manifest.tasks), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigverify", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a vendor file to the canonical signature format")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--layout", default="columns", choices=sorted(CONVERTERS))
    p.add_argument("--id", default=None)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("compare", help="score a comparison list")
    p.add_argument("--config", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--comparisons", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("eval", help="EER report and DET curves for a score file")
    p.add_argument("--scores", required=True)
    p.add_argument("--comparisons", required=True, help="comparison file with ground-truth labels")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--orientation", default="higher_is_genuine",
                   choices=("higher_is_genuine", "lower_is_genuine"))
    p.add_argument("--team", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("rank", help="points ranking from task<k>/<team>.txt reports")
    p.add_argument("directory")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--config", default=None, help="SynthSpec key = value file")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
