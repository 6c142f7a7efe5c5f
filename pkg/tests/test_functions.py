import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_lab.errors import DomainError, ExtrapolationError, InputError
from orlicz_lab.orlicz import (
    CATALOG,
    QuadLog,
    LinearSpliced,
    PhiA,
    PhiB,
    PhiR,
    Power,
    TabulatedConvex,
    VallePoussinSum,
    evaluate,
    make_catalog,
    right_derivative,
)

from conftest import catalog_instances

U = np.logspace(-6, 8, 57)

CLOSED_FORMS = [
    (Power(2.5), lambda u: u ** 2.5),
    (Power(3.0, c=0.5), lambda u: 0.5 * u ** 3),
    (QuadLog(), lambda u: np.where(u <= 1, u * u / 2, u * np.log(np.maximum(u, 1)) + 0.5)),
    (PhiR(2.0), lambda u: u * np.log1p(u) ** 2),
    (PhiA(3.0), lambda u: u * np.sqrt(1 + 3 * np.log1p(u))),
    (PhiB(1.0), lambda u: u * np.exp(np.sqrt(1 + np.log(np.maximum(u, 1))))),
    (LinearSpliced(), lambda u: np.where(u <= 1, u, u * u)),
    (VallePoussinSum([0, 1, 2, 4]), lambda u: u + np.maximum(u - 1, 0) + np.maximum(u - 2, 0)
     + np.maximum(u - 4, 0)),
]


@pytest.mark.parametrize("phi,exact", CLOSED_FORMS, ids=lambda x: getattr(x, "name", ""))
def test_value_matches_closed_form(phi, exact):
    np.testing.assert_allclose(phi.value(U), exact(U), rtol=1e-12)


@pytest.mark.parametrize("phi", catalog_instances(), ids=repr)
def test_derivative_matches_finite_differences(phi):
    u = np.array([1e-3, 0.3, 0.7, 1.5, 3.0, 40.0, 1e4])
    h = 1e-6 * u
    fd = (phi.value(u + h) - phi.value(u)) / h
    np.testing.assert_allclose(phi.derivative(u), fd, rtol=1e-4)


@pytest.mark.parametrize("phi", catalog_instances(), ids=repr)
def test_kappa_is_log_slope(phi):
    s = np.linspace(-10, 30, 41) + 0.0123  # off the breakpoints
    h = 1e-6
    fd = (phi.log_value(s + h) - phi.log_value(s - h)) / (2 * h)
    np.testing.assert_allclose(1 + phi.kappa(s), fd, rtol=1e-5, atol=1e-8)


@pytest.mark.parametrize("phi", catalog_instances(), ids=repr)
def test_convex_increasing_and_zero_at_origin(phi):
    u = np.linspace(0, 20, 2001)
    v = phi.value(u)
    assert v[0] == 0
    assert np.all(np.diff(v) >= 0)
    assert np.all(np.diff(v, 2) >= -1e-9 * np.maximum(1, v[2:]))


def test_log_value_far_tail_stays_finite():
    s = np.array([100.0, 1000.0, 5000.0])
    for phi in catalog_instances():
        assert np.all(np.isfinite(phi.log_value(s)))


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        Power(2).value(-1.0)


@pytest.mark.parametrize("name,params", [("power", {"p": 1.0}), ("phi_r", {"r": 0}),
                                         ("phi_a", {"a": -1}), ("phi_b", {"b": 0}),
                                         ("nope", {})])
def test_bad_catalog_parameters(name, params):
    with pytest.raises(InputError):
        make_catalog(name, **params)


@pytest.mark.parametrize("thresholds", [[1, 2, 4], [0, 2, 1], [0, 1, 1.5]])
def test_valle_poussin_thresholds_validated(thresholds):
    with pytest.raises(InputError):
        VallePoussinSum(thresholds)


def test_valle_poussin_is_not_coercive():
    assert not VallePoussinSum([0, 1, 2]).coercive
    assert all(CATALOG[k]().coercive for k in ("example55", "phi_r", "linear_spliced"))


def test_evaluate_and_right_derivative_at_kink():
    phi = LinearSpliced()
    assert evaluate(phi, 1.0) == 1.0
    assert right_derivative(phi, 1.0) == 2.0
    assert right_derivative(phi, 0.5) == 1.0


def test_tabulated_roundtrip_csv(tmp_path):
    u = np.logspace(-6, 6, 200)
    tab = TabulatedConvex.from_samples(u, u ** 3)
    path = tmp_path / "phi.csv"
    tab.to_csv(path)
    back = TabulatedConvex.from_csv(path)
    np.testing.assert_allclose(back.value(u), u ** 3, rtol=1e-9)


def test_tabulated_interpolates_and_refuses_to_extrapolate():
    u = np.logspace(-6, 6, 2000)
    tab = TabulatedConvex.from_samples(u, u ** 2)
    x = np.array([2e-5, 0.37, 12.0, 5e5])
    # chord interpolation overestimates by at most (ratio - 1)**2 / 4
    np.testing.assert_allclose(tab.value(x), x ** 2, rtol=1e-4)
    assert np.all(tab.value(x) >= x ** 2 * (1 - 1e-12))
    with pytest.raises(ExtrapolationError):
        tab.value(1e7)
    ext = TabulatedConvex.from_samples(u, u ** 2, extrapolate=True)
    assert ext.value(1e7) > ext.value(1e6)


def test_tabulated_rejects_non_convex_and_thin_tables():
    u = np.logspace(-6, 6, 50)
    with pytest.raises(InputError):
        TabulatedConvex.from_samples(u, np.sqrt(u))
    with pytest.raises(InputError):
        TabulatedConvex.from_samples([1.0, 2.0], [1.0, 4.0])
    with pytest.raises(InputError):
        TabulatedConvex.from_samples(np.logspace(0, 6, 20), np.logspace(0, 12, 20))


@given(st.floats(1.01, 6.0), st.floats(1e-4, 1e4))
def test_power_value_log_value_consistent(p, u):
    phi = Power(p)
    assert math.isclose(math.log(phi.value(u)), phi.log_value(math.log(u)), rel_tol=1e-12,
                        abs_tol=1e-12)


@given(st.sampled_from(catalog_instances()), st.floats(1e-6, 1e6), st.floats(1.0, 8.0))
def test_superadditive_scaling(phi, u, lam):
    # convexity with phi(0) = 0 gives phi(lam u) >= lam phi(u) for lam >= 1
    assert phi.value(lam * u) >= lam * phi.value(u) * (1 - 1e-12)
