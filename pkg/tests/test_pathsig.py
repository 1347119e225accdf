import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sigverify.errors import ValidationError
from sigverify.pathsig import chen_product, extract_pathsig, path_signature, signature_dim

from conftest import make_signature
from oracles import level2_signature, level3_signature


def test_straight_line_depth2():
    s = path_signature([[0, 0], [1, 2]], 2)
    assert s.tolist() == [1, 2, 0.5, 1, 1, 2]


def test_dimension():
    for d in (1, 2, 3):
        for depth in (1, 2, 3, 4):
            path = np.random.default_rng(d).normal(size=(5, d))
            assert path_signature(path, depth).shape == (signature_dim(d, depth),)


def test_depth_guard():
    with pytest.raises(ValidationError):
        path_signature(np.zeros((3, 2)), 5)
    with pytest.raises(ValidationError):
        path_signature(np.zeros((1, 2)), 2)


paths = st.integers(2, 8).flatmap(
    lambda n: st.integers(1, 3).flatmap(
        lambda d: arrays(np.float64, (n, d), elements=st.floats(-5, 5))))


@settings(max_examples=80, deadline=None)
@given(paths)
def test_level1_is_displacement(path):
    d = path.shape[1]
    assert np.array_equal(path_signature(path, 3)[:d], path[-1] - path[0])


@settings(max_examples=50, deadline=None)
@given(paths)
def test_levels_match_direct_sums(path):
    d = path.shape[1]
    s = path_signature(path, 3)
    np.testing.assert_allclose(s[d:d + d * d].reshape(d, d), level2_signature(path), atol=1e-9)
    np.testing.assert_allclose(s[d + d * d:].reshape(d, d, d), level3_signature(path), atol=1e-9)


def test_collinear_subdivision(rng):
    path = rng.normal(size=(6, 3))
    finer = np.insert(path, 3, 0.3 * path[2] + 0.7 * path[3], axis=0)
    np.testing.assert_allclose(path_signature(finer, 4), path_signature(path, 4), rtol=0, atol=1e-12)


def test_chen_identity(rng):
    a = rng.normal(size=(5, 2))
    b = rng.normal(size=(7, 2)) + (a[-1] - rng.normal(size=2))
    b[0] = a[-1]
    whole = path_signature(np.vstack([a, b[1:]]), 3)
    np.testing.assert_allclose(whole, chen_product(path_signature(a, 3), path_signature(b, 3), 2, 3), atol=1e-9)


def test_pathsig_extractor(wavy_signature):
    f = extract_pathsig(wavy_signature, depth=2)
    assert len(f) == 5 + 25
    assert f.names[0] == "S0" and f.names[5] == "S0_0"
    full = extract_pathsig(wavy_signature.replace(p=None), depth=2, full=True)
    assert len(full) == 7 + 49
