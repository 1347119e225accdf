"""Generate the default synthetic dataset and evaluate one or more configs on it.

    python scripts/run_synthetic_benchmark.py configs/*.cfg --seed 0 --workers 4
"""

import argparse
import tempfile
import time
from pathlib import Path

from sigverify import config as cfg
from sigverify.evaluation import ScoreRecord, evaluate
from sigverify.pipeline import Pipeline
from sigverify.synth import write_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("configs", nargs="+")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--data", default=None, help="reuse/write the dataset here instead of a temp dir")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        root = Path(args.data or tmp)
        manifest = write_dataset(cfg.SynthSpec(seed=args.seed), root)
        print(f"{'config':<28} {'task':>4} {'overall':>8} {'skilled':>8} {'random':>8} {'sec':>6}")
        for path in args.configs:
            pipe = Pipeline(cfg.load(cfg.PipelineConfig, Path(path).read_text()))
            for task in sorted(manifest.tasks):
                comps = manifest.tasks[task]
                start = time.perf_counter()
                scores = pipe.score_comparisons(manifest, comps, workers=args.workers)
                rep = evaluate([ScoreRecord(s, c.expected) for s, c in zip(scores, comps)])
                print(f"{Path(path).name:<28} {task:>4} {rep.eer_overall:>8.2f} {rep.eer_skilled:>8.2f} "
                      f"{rep.eer_random:>8.2f} {time.perf_counter() - start:>6.1f}")


if __name__ == "__main__":
    main()
