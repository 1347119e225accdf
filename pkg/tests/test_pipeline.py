import random

import pytest

from sigverify import config as cfg
from sigverify.errors import ValidationError
from sigverify.ingest import ComparisonList
from sigverify.pipeline import Pipeline
from sigverify.synth import write_dataset


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth")
    return write_dataset(cfg.SynthSpec(subjects=4, genuine_per_subject=3, skilled_per_subject=2, seed=5), root)


CONFIGS = [
    "",
    "preprocess.steps = drop_zero_pressure, resample_uniform, scale_center\nfeatures.extractors = dlvc12",
    "features.extractors = sig9\nmatcher.name = softdtw\nmatcher.metric = sq_euclidean",
    "features.extractors = mad13",
    "features.extractors = pathsig\nfeatures.pathsig_depth = 3\nfeatures.pathsig_full = true",
    "features.extractors = baseline, mad13\nscorer.weights = 0.7, 0.3\n"
    "scorer.normalization = tanh\nscorer.tanh_mu = -1, -2\nscorer.tanh_sigma = 0.5, 1",
    "scorer.threshold = sigstat_local\nscorer.g_th = 0.2\nscorer.f_th = 0.5",
    "scorer.threshold = sigstat_global\nscorer.d_g_min = 0.1\nscorer.d_f_med = 0.6",
]


@pytest.mark.parametrize("text", CONFIGS)
def test_configs_score_every_comparison(dataset, text):
    pipe = Pipeline(cfg.load(cfg.PipelineConfig, text))
    comps = dataset.tasks[3]
    scores = pipe.score_comparisons(dataset, comps)
    assert len(scores) == len(comps)
    assert all(isinstance(s, float) for s in scores)


@pytest.mark.parametrize("text", CONFIGS[:3])
def test_self_comparison_is_maximal(dataset, text):
    pipe = Pipeline(cfg.load(cfg.PipelineConfig, text))
    comps = dataset.tasks[1]
    ref = comps[0].reference_id
    own = pipe.compare(dataset.load(ref), dataset.load(ref))
    others = pipe.score_comparisons(dataset, comps)
    assert own >= max(others)


def test_order_independence(dataset):
    pipe = Pipeline(cfg.PipelineConfig())
    comps = list(dataset.tasks[3])
    scores = dict(zip(comps, pipe.score_comparisons(dataset, ComparisonList(tuple(comps)))))
    random.Random(0).shuffle(comps)
    shuffled = pipe.score_comparisons(dataset, ComparisonList(tuple(comps)), workers=4)
    assert shuffled == [scores[c] for c in comps]


def test_unknown_id_reports_line(dataset):
    comps = dataset.tasks[1]
    bad = ComparisonList((comps[0], type(comps[0])(comps[0].reference_id, "missing-id", None)))
    with pytest.raises(ValidationError, match="line 2.*missing-id"):
        Pipeline(cfg.PipelineConfig()).score_comparisons(dataset, bad)
