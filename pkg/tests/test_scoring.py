import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigverify.errors import ValidationError
from sigverify.evaluation import ScoreRecord, eer
from sigverify.scoring import (
    estimate_tanh_params,
    fuse_weighted,
    grid_search_weights,
    sigstat_global_score,
    sigstat_local_score,
    sigstat_thresholds,
    simplex_grid,
    tanh_normalize,
    to_similarity,
)


def test_tanh_examples():
    assert tanh_normalize([0.0], 0.0, 1.0)[0] == 0.5
    assert tanh_normalize([100.0], 0.0, 1.0)[0] == pytest.approx(0.5 * (np.tanh(1.0) + 1), abs=1e-15)
    assert tanh_normalize([100.0], 0.0, 1.0)[0] == pytest.approx(0.8808, abs=1e-4)
    with pytest.raises(ValidationError):
        tanh_normalize([1.0], 0.0, 0.0)


@given(st.lists(st.floats(-1e4, 1e4), min_size=2, max_size=20), st.floats(-10, 10), st.floats(0.1, 10))
def test_tanh_monotone_and_bounded(scores, mu, sigma):
    s = np.sort(np.array(scores))
    out = tanh_normalize(s, mu, sigma)
    assert np.all(np.diff(out) >= 0)
    assert np.all((out >= 0) & (out <= 1))


def test_estimate_tanh_params():
    assert estimate_tanh_params([1.0, 3.0]) == (2.0, 1.0)
    with pytest.raises(ValidationError):
        estimate_tanh_params([1.0])
    with pytest.raises(ValidationError):
        estimate_tanh_params([2.0, 2.0])


def test_fuse_examples():
    assert fuse_weighted([0.9, 0.3], [2, 1]) == pytest.approx(0.7)
    assert fuse_weighted([0.4, 0.8], [1, 1]) == pytest.approx(0.6)
    assert fuse_weighted([0.4, 0.8], [0, 1]) == 0.8
    for bad in ([1], [-1, 2], [0, 0]):
        with pytest.raises(ValidationError):
            fuse_weighted([0.4, 0.8], bad)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=5), st.data())
def test_fuse_is_convex(scores, data):
    w = data.draw(st.lists(st.floats(0.01, 5), min_size=len(scores), max_size=len(scores)))
    v = fuse_weighted(scores, w)
    assert min(scores) - 1e-12 <= v <= max(scores) + 1e-12


def test_simplex_grid():
    grid = list(simplex_grid(2, 0.25))
    assert grid == [(0.0, 1.0), (0.25, 0.75), (0.5, 0.5), (0.75, 0.25), (1.0, 0.0)]
    assert len(list(simplex_grid(3, 0.05))) == 231
    with pytest.raises(ValidationError):
        list(simplex_grid(2, 0.3))


def test_grid_search_finds_informative_stream(rng):
    labels = np.array([1] * 20 + [0] * 20)
    good = labels + rng.normal(0, 0.1, 40)
    noise = rng.normal(0, 1, 40)
    labs = ["genuine" if k else "skilled_forgery" for k in labels]

    def objective(fused):
        return eer([ScoreRecord(float(s), lab) for s, lab in zip(fused, labs)])

    w, v = grid_search_weights([noise, good], objective, step=0.1)
    assert v == 0.0
    assert w[1] > w[0]


def test_sigstat_local_boundaries():
    g_th, f_th, s = 0.3, 0.8, 2.0
    assert sigstat_local_score(g_th, g_th, f_th, s) == 1.0
    assert sigstat_local_score(s * f_th, g_th, f_th, s) == 0.0
    # unclamped outside the band
    assert sigstat_local_score(0.0, g_th, f_th, s) > 1.0
    assert sigstat_local_score(5.0, g_th, f_th, s) < 0.0
    with pytest.raises(ValidationError):
        sigstat_local_score(1.0, 2.0, 1.0, 2.0)


def test_sigstat_global_boundaries():
    lo, hi = 0.25, 1.75
    assert sigstat_global_score(lo, lo, hi) == 0.0
    assert sigstat_global_score(hi, lo, hi) == 1.0
    assert sigstat_global_score(lo - 1, lo, hi) == 0.0
    assert sigstat_global_score(hi + 1, lo, hi) == 1.0
    assert sigstat_global_score(1.0, lo, hi) == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        sigstat_global_score(1.0, 1.0, 1.0)


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_sigstat_global_monotone_and_clamped(d1, d2):
    a, b = sorted((d1, d2))
    va, vb = sigstat_global_score(a, -1.0, 2.0), sigstat_global_score(b, -1.0, 2.0)
    assert 0 <= va <= vb <= 1


def test_sigstat_thresholds():
    g = np.arange(1, 101, dtype=float)
    f = np.array([5.0, 7.0, 9.0])
    th = sigstat_thresholds(g, f)
    assert th["g_th"] == pytest.approx(np.percentile(g, 5))
    assert th["f_th"] == 7.0 and th["d_f_med"] == 7.0
    assert th["d_g_min"] == 1.0 and th["s"] == 2.0


def test_to_similarity():
    np.testing.assert_array_equal(to_similarity([1.0, 2.0], "lower_is_genuine"), [-1.0, -2.0])
    np.testing.assert_array_equal(to_similarity([1.0, 2.0], "higher_is_genuine"), [1.0, 2.0])
    with pytest.raises(ValidationError):
        to_similarity([1.0], "sideways")
