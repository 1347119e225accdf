import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigverify.errors import DegenerateInputError, ValidationError
from sigverify.features import (
    EPS,
    MAD13_NAMES,
    GlobalFeatureVector,
    TimeFunctionMatrix,
    derivative,
    extract_baseline,
    extract_dlvc12,
    extract_mad13,
    extract_sig9,
    feature_diff,
    features_to_csv,
    skewness,
)

from conftest import make_signature

DLVC_NAMES = ("x_dot", "y_dot", "v", "theta", "cos_theta", "sin_theta", "z",
              "v_dot", "theta_dot", "rho", "c", "a")


def test_derivative():
    assert derivative([0, 1, 2], 1).tolist() == [0, 1, 1]
    assert derivative([3, 3, 3], 0.5).tolist() == [0, 0, 0]
    assert derivative([0, 2], 2).tolist() == [0, 1]
    with pytest.raises(ValidationError):
        derivative([0, 1], 0)
    with pytest.raises(ValidationError):
        derivative([0], 1)


def test_tfm_invariants():
    with pytest.raises(ValidationError):
        TimeFunctionMatrix(("a",), [[np.nan], [1]])
    with pytest.raises(ValidationError):
        TimeFunctionMatrix(("a", "a"), np.zeros((3, 2)))
    m = TimeFunctionMatrix.from_channels([("a", [1, 2]), ("b", [3, 4])], 10.0)
    assert m.channel("b").tolist() == [3, 4]
    assert [n for n, _ in m.channels] == ["a", "b"]


def test_dlvc12_straight_line():
    n = 20
    sig = make_signature(np.arange(n, dtype=float), np.zeros(n), t=np.arange(n, dtype=float), p=np.ones(n))
    m = extract_dlvc12(sig)
    assert m.names == DLVC_NAMES
    v = m.channel("v")
    assert v[0] == 0 and np.all(v[1:] == 1)
    assert np.all(m.channel("theta") == 0)
    assert np.all(m.channel("c") == 0)
    np.testing.assert_array_equal(m.channel("a"), np.abs(m.channel("v_dot")))


def test_dlvc12_circle_constant_speed():
    hz, radius, omega = 100.0, 50.0, 2.0  # rad/s
    t = np.arange(0, 1.5, 1 / hz)
    sig = make_signature(radius * np.cos(omega * t), radius * np.sin(omega * t), t=t * 1000, p=np.ones(len(t)))
    m = extract_dlvc12(sig)
    T = 1000 / hz
    # chord speed and turning rate of a uniformly sampled circle
    step = omega / hz
    v_expected = 2 * radius * np.sin(step / 2) / T
    np.testing.assert_allclose(m.channel("v")[1:], v_expected, rtol=1e-3)
    np.testing.assert_allclose(m.channel("theta_dot")[2:], step / T, rtol=1e-3)
    np.testing.assert_allclose(m.channel("c")[2:], v_expected * step / T, rtol=1e-3)
    # continuous-time values agree within the discretisation error
    np.testing.assert_allclose(m.channel("v")[1:], radius * omega / 1000, rtol=1e-3)


def test_dlvc12_circle_crossing_angle_wrap():
    t = np.arange(0, 4.0, 0.01)
    sig = make_signature(np.cos(2 * t), np.sin(2 * t), t=t * 1000, p=np.ones(len(t)))
    dtheta = extract_dlvc12(sig).channel("theta_dot")[2:]
    np.testing.assert_allclose(dtheta, dtheta[0], rtol=1e-9)


def test_dlvc12_stationary_pen():
    sig = make_signature(np.full(5, 3.0), np.full(5, 4.0), p=np.ones(5))
    m = extract_dlvc12(sig)
    assert np.all(m.channel("v") == 0)
    assert np.all(m.channel("theta") == 0)
    assert np.all(m.channel("rho") == np.log(EPS))


def test_dlvc12_missing_pressure_is_constant_one():
    sig = make_signature([0, 1, 3, 2], [0, 2, 1, 1])
    assert extract_dlvc12(sig).channel("z").tolist() == [1, 1, 1, 1]


def test_dlvc12_too_short():
    with pytest.raises(DegenerateInputError):
        extract_dlvc12(make_signature([0, 1], [0, 1], p=[1, 1]))


def test_dlvc12_acceleration_identity(wavy_signature):
    m = extract_dlvc12(wavy_signature)
    lhs = m.channel("a") ** 2
    rhs = m.channel("v_dot") ** 2 + m.channel("c") ** 2
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-9)


def test_dlvc12_translation_invariance(wavy_signature):
    moved = wavy_signature.replace(x=wavy_signature.x + 123.0, y=wavy_signature.y - 77.0)
    a, b = extract_dlvc12(wavy_signature), extract_dlvc12(moved)
    for name in ("v", "theta", "cos_theta", "sin_theta", "theta_dot", "c", "a", "z"):
        np.testing.assert_allclose(a.channel(name), b.channel(name), atol=1e-9)


def test_sig9_channels(wavy_signature):
    m = extract_sig9(wavy_signature)
    assert m.names == ("x", "y", "v", "z_dot", "v_dot", "Theta_dot", "v5_ratio", "alpha_dot", "cos_alpha")
    finger = extract_sig9(wavy_signature.replace(p=None))
    # only the pressure derivative depends on pressure
    assert finger.names == ("x", "y", "v", "v_dot", "Theta_dot", "v5_ratio", "alpha_dot", "cos_alpha")


def test_sig9_translation_changes_raw_coordinates(wavy_signature):
    moved = wavy_signature.replace(x=wavy_signature.x + 10.0)
    a, b = extract_sig9(wavy_signature), extract_sig9(moved)
    assert not np.allclose(a.channel("x"), b.channel("x"))
    np.testing.assert_allclose(a.channel("v"), b.channel("v"), atol=1e-9)


def test_sig9_straight_constant_speed():
    n = 12
    sig = make_signature(np.arange(n) * 2.0, np.zeros(n), p=np.ones(n))
    m = extract_sig9(sig)
    assert np.all(m.channel("v5_ratio")[1:] == 1)
    assert np.all(m.channel("alpha_dot") == 0)
    assert np.all(m.channel("cos_alpha") == 1)


def test_sig9_v5_window():
    # speeds 0 (padding), 1, 2, 4, 8, 16, 32
    x = np.concatenate(([0.0], np.cumsum([1, 2, 4, 8, 16, 32])))
    m = extract_sig9(make_signature(x, np.zeros(7), t=np.arange(7.0)))
    assert m.channel("v5_ratio")[1:].tolist() == [1, 1 / 2, 1 / 4, 1 / 8, 1 / 16, 2 / 32]


def test_baseline_quadratic():
    t = np.arange(8, dtype=float)
    m = extract_baseline(make_signature(t**2, np.zeros(8), t=t))
    assert m.names == ("x", "y", "x_dot", "y_dot", "x_ddot", "y_ddot")
    assert np.all(m.channel("x_ddot")[2:] == 2)


def test_baseline_constant_position():
    m = extract_baseline(make_signature(np.full(4, 2.0), np.full(4, 1.0)))
    assert m.values.shape == (4, 6)
    assert np.all(m.values[:, 2:] == 0)


def test_mad13():
    sig = make_signature([1, -1, 2], [0, 1, 5])
    f = extract_mad13(sig)
    assert f.names == MAD13_NAMES
    assert f["n_steps"] == 3
    assert f["frac_x_pos"] == 2 / 3
    assert f["frac_x_neg"] == 1 / 3
    assert f["mean_x"] == pytest.approx(2 / 3)
    assert f["median_x"] == 1
    # population moments by hand: x - mean = (1/3, -5/3, 4/3)
    m2 = (1 + 25 + 16) / 27
    m3 = (1 - 125 + 64) / 81
    assert f["std_x"] == pytest.approx(np.sqrt(m2))
    assert f["skew_x"] == pytest.approx(m3 / m2**1.5)


def test_mad13_symmetric_and_constant():
    f = extract_mad13(make_signature([-2, -1, 0, 1, 2], [3, 3, 3, 3, 3]))
    assert f["skew_x"] == 0
    assert f["skew_y"] == 0
    assert skewness([0.1] * 7) == 0


def test_feature_diff():
    a = GlobalFeatureVector(("p", "q"), [1, 2])
    b = GlobalFeatureVector(("p", "q"), [3, 1])
    assert feature_diff(a, b).values.tolist() == [2, 1]
    assert feature_diff(a, a).values.tolist() == [0, 0]
    with pytest.raises(ValidationError):
        feature_diff(a, GlobalFeatureVector(("q", "p"), [1, 1]))


vec = st.lists(st.floats(-1e6, 1e6), min_size=3, max_size=3)


@given(vec, vec, vec)
def test_feature_diff_properties(a, b, c):
    names = ("f0", "f1", "f2")
    A, B, C = (GlobalFeatureVector(names, v) for v in (a, b, c))
    ab, ba = feature_diff(A, B).values, feature_diff(B, A).values
    assert np.array_equal(ab, ba)
    assert np.all(ab >= 0)
    ac, bc = feature_diff(A, C).values, feature_diff(B, C).values
    assert np.all(ac <= ab + bc + 1e-6)


def test_features_csv():
    f = GlobalFeatureVector(("a", "b"), [1.5, -2])
    assert features_to_csv([("s1", f), ("s2", f)]) == "id,a,b\ns1,1.5,-2.0\ns2,1.5,-2.0\n"
