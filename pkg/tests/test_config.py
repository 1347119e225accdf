import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigverify import config as cfg
from sigverify.errors import FormatError, ValidationError


def test_defaults_round_trip():
    for cls in (cfg.PipelineConfig, cfg.SynthSpec):
        text = cfg.dump(cls())
        assert cfg.dump(cfg.load(cls, text)) == text


def test_partial_file_and_comments():
    text = """
    # baseline
    features.extractors = dlvc12, sig9   # two streams
    scorer.weights = 2, 1
    matcher.name = softdtw
    matcher.gamma = 0.5
    """
    c = cfg.load(cfg.PipelineConfig, text)
    assert c.features.extractors == ("dlvc12", "sig9")
    assert c.scorer.weights == (2.0, 1.0)
    assert c.matcher.gamma == 0.5
    assert c.preprocess.target_hz == 100.0
    again = cfg.dump(c)
    assert cfg.dump(cfg.load(cfg.PipelineConfig, again)) == again


@given(
    st.lists(st.sampled_from(cfg.EXTRACTORS), min_size=1, max_size=3, unique=True),
    st.floats(1e-3, 10, allow_nan=False),
    st.booleans(),
    st.sampled_from(("euclidean", "sq_euclidean")),
)
def test_round_trip_is_idempotent(extractors, gamma, znorm, metric):
    c = cfg.PipelineConfig()
    c.features.extractors = tuple(extractors)
    c.features.znorm = znorm
    c.matcher.gamma = gamma
    c.matcher.metric = metric
    if len(extractors) > 1:
        c.scorer.weights = tuple(1.0 for _ in extractors)
    text = cfg.dump(c)
    parsed = cfg.load(cfg.PipelineConfig, text)
    assert parsed == c
    assert cfg.dump(parsed) == text


@pytest.mark.parametrize("text", [
    "matcher.name = lcss",
    "matcher.metric = manhattan",
    "features.extractors = baseline, sig9",
    "features.extractors =",
    "scorer.normalization = tanh",
    "scorer.threshold = sigstat_global\nscorer.d_g_min = 2\nscorer.d_f_med = 1",
    "matcher.name = softdtw\nmatcher.gamma = 0",
    "preprocess.steps = smooth",
    "features.pathsig_depth = 5",
    "matcher.gamma = fast",
    "nonsense.key = 1",
])
def test_invalid_configs(text):
    with pytest.raises(ValidationError):
        cfg.load(cfg.PipelineConfig, text)


def test_format_errors():
    with pytest.raises(FormatError):
        cfg.parse_kv("just words")
    with pytest.raises(FormatError):
        cfg.parse_kv("a = 1\na = 2")


def test_synth_spec_validation():
    with pytest.raises(ValidationError):
        cfg.load(cfg.SynthSpec, "genuine_jitter = 0.5\nforgery_warp = 0.1")
    with pytest.raises(ValidationError):
        cfg.load(cfg.SynthSpec, "subjects = 1")
    assert cfg.load(cfg.SynthSpec, "seed = 7").seed == 7
