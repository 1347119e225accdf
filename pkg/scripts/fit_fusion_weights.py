"""Fit tanh parameters and fusion weights on a development split of synthetic data.

Scores each stream of a multi-extractor config on the first half of the
subjects, estimates per-stream tanh parameters from genuine scores,
grid-searches fusion weights for the lowest EER, and prints the resulting
``scorer.*`` lines.

    python scripts/fit_fusion_weights.py configs/fusion.cfg --task 1
"""

import argparse
import dataclasses
import tempfile
from pathlib import Path

import numpy as np

from sigverify import config as cfg
from sigverify.evaluation import ScoreRecord, eer
from sigverify.pipeline import Pipeline
from sigverify.scoring import estimate_tanh_params, grid_search_weights, tanh_normalize
from sigverify.synth import write_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--task", type=int, default=1)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    base = cfg.load(cfg.PipelineConfig, Path(args.config).read_text())
    with tempfile.TemporaryDirectory() as tmp:
        manifest = write_dataset(cfg.SynthSpec(seed=args.seed), tmp)
        comps = manifest.tasks[args.task]
        labels = [c.expected for c in comps]
        streams = []
        for name in base.features.extractors:
            one = dataclasses.replace(
                base,
                features=dataclasses.replace(base.features, extractors=(name,)),
                scorer=dataclasses.replace(base.scorer, normalization="none", tanh_mu=(), tanh_sigma=(), weights=()),
            )
            streams.append(np.array(Pipeline(one).score_comparisons(manifest, comps)))

    params = [estimate_tanh_params(s[[lab == "genuine" for lab in labels]]) for s in streams]
    normed = [tanh_normalize(s, mu, sigma) for s, (mu, sigma) in zip(streams, params)]

    def objective(fused):
        return eer([ScoreRecord(float(v), lab) for v, lab in zip(fused, labels)])

    weights, best = grid_search_weights(normed, objective)
    for name, s in zip(base.features.extractors, normed):
        print(f"# {name}: EER {objective(s):.2f}%")
    print(f"# fused: EER {best:.2f}%")
    print("scorer.normalization = tanh")
    print("scorer.tanh_mu = " + ", ".join(repr(m) for m, _ in params))
    print("scorer.tanh_sigma = " + ", ".join(repr(s) for _, s in params))
    print("scorer.weights = " + ", ".join(repr(w) for w in weights))


if __name__ == "__main__":
    main()
