from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from anisogreen.core.exceptions import (
    DegenerateDirectionError,
    DomainError,
    SingularPointError,
    UnsupportedModeError,
    WrongBranchError,
)
from anisogreen.services.christoffel import mode_constants
from anisogreen.services.potential import (
    SERIES_THRESHOLD,
    EllipsoidalFrame,
    closed_integrals,
    hessian_case1,
    hessian_case2,
    hessian_general,
    largest_root_S,
    static_potential,
)
from anisogreen.services.scalarwave import scalar_solution
from anisogreen.services.validation import fd_hessian, reference_quadrature


def _relative(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.linalg.norm(actual - expected) / np.linalg.norm(expected))


def test_largest_root_simple_example():
    frame = EllipsoidalFrame(b=(1.0, 1.0, 1.0), m=(1.0, 1.0, 1.0))
    assert largest_root_S(frame, (2.0, 0.0, 0.0), 1.0) == pytest.approx(3.0, rel=1e-10)


def test_largest_root_matches_bracketing_solver():
    frame = EllipsoidalFrame(b=(1.0, 1.6, 0.7), m=(0.5, 1.2, 0.9))
    x = np.array([0.8, -1.1, 0.4])
    tau = frame.travel_time(x)
    for h in np.linspace(0.05, 0.95, 7) * tau:
        expected = brentq(lambda s: frame.F(x, h, s), 0.0, 1e8, xtol=1e-14, rtol=1e-14)
        assert largest_root_S(frame, x, h) == pytest.approx(expected, rel=1e-9)


def test_root_vanishes_on_wavefront():
    frame = EllipsoidalFrame(b=(1.0, 1.0, 2.0), m=(1.0, 1.0, 1.0))
    x = (0.3, 0.4, 1.0)
    tau = frame.travel_time(np.asarray(x))
    assert largest_root_S(frame, x, tau * (1.0 - 1e-15)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(("h", "error"), [(0.0, DomainError), (2.5, WrongBranchError)])
def test_root_domain_checks(h, error):
    frame = EllipsoidalFrame(b=(1.0, 1.0, 1.0), m=(1.0, 1.0, 1.0))
    with pytest.raises(error):
        largest_root_S(frame, (2.0, 0.0, 0.0), h)


def test_root_below_axis_time_rejected():
    frame = EllipsoidalFrame(b=(1.0, 1.0, 1.0), m=(1.0, 1.0, 0.0))
    with pytest.raises(WrongBranchError, match="axis time"):
        largest_root_S(frame, (0.3, 0.0, 1.0), 0.5)


def test_frame_validation():
    with pytest.raises(DomainError):
        EllipsoidalFrame(b=(1.0, 0.0, 1.0), m=(1.0, 1.0, 1.0))
    with pytest.raises(DomainError, match="at least one"):
        EllipsoidalFrame(b=(1.0, 1.0, 1.0), m=(0.0, 0.0, 0.0))


def test_frame_from_starred_mode_rejected(medium2):
    with pytest.raises(UnsupportedModeError):
        EllipsoidalFrame.from_mode(mode_constants(medium2, 3))


def test_closed_integrals_static_values():
    assert closed_integrals(0.0, 2.0) == pytest.approx((2.0, 2.0, 8.0 / 3.0), rel=1e-15)


def test_closed_integrals_reject_negative_tau():
    with pytest.raises(DomainError):
        closed_integrals(1.0, -0.1)


@pytest.mark.parametrize("switch", [SERIES_THRESHOLD, 1.0])
def test_closed_integrals_continuous_across_regimes(switch):
    K = cmath.exp(0.3j)
    below = closed_integrals(K, switch * (1.0 - 1e-10))
    above = closed_integrals(K, switch * (1.0 + 1e-10))
    for low, high in zip(below, above):
        assert low == pytest.approx(high, rel=1e-9)


def test_closed_integrals_match_reference_quadrature():
    rng = np.random.default_rng(2024)
    samples = []
    for _ in range(100):
        K = complex(rng.uniform(0.0, 20.0), rng.uniform(0.0, 2.0))
        samples.append((K, float(10.0 ** rng.uniform(-6.0, 0.4))))
    samples += [(1.0 + 0.1j, SERIES_THRESHOLD * factor) for factor in (0.9, 1.1)]
    samples += [(1.0 + 0.1j, factor) for factor in (0.95, 1.05)]
    for K, tau in samples:
        closed = closed_integrals(K, tau)
        for power in range(3):
            reference = reference_quadrature(
                lambda h, p=power: h**p * cmath.exp(1j * K * h), 0.0, tau, tol=1e-13
            )
            assert abs(closed[power] - reference) <= 1e-12 * max(1.0, abs(reference))


@pytest.mark.parametrize(
    ("x", "omega", "beta", "gamma"),
    [
        ((0.6, -0.4, 0.9), 0.5, 0.0, 2.0),
        ((1.2, 0.3, -0.2), 3.0, 0.01, 2.0),
        ((-0.3, 0.8, 0.5), 2.0, 0.005, 1.5),
    ],
)
def test_case1_matches_general_evaluator(x, omega, beta, gamma):
    b = 1.3
    frame = EllipsoidalFrame(b=(b, b, b), m=(1.0, 1.0, 1.0))
    closed = hessian_case1(b, x, omega, beta, gamma, rho=2.0)
    general = hessian_general(frame, x, omega, beta, gamma, rho=2.0)
    assert general.axes == (0, 1, 2)
    assert _relative(general.H, closed.H) <= 1e-8


@pytest.mark.parametrize(
    ("x", "omega", "beta"),
    [
        ((0.6, -0.4, 0.9), 1.0, 0.0),
        ((0.2, 0.1, -1.4), 2.5, 0.01),
        ((1.5, -0.9, 0.05), 4.0, 0.002),
    ],
)
def test_case2_matches_general_evaluator(x, omega, beta):
    frame = EllipsoidalFrame(b=(1.1, 1.1, 0.7), m=(1.0, 1.0, 0.0))
    closed = hessian_case2(1.1, 0.7, x, omega, beta, 2.0, rho=1.5)
    general = hessian_general(frame, x, omega, beta, 2.0, rho=1.5)
    assert general.axes == (0, 1)
    assert _relative(general.H, closed.H) <= 1e-8


def test_static_case1_matches_fd_hessian_of_potential():
    b = 1.2
    frame = EllipsoidalFrame(b=(b, b, b), m=(1.0, 1.0, 1.0))
    x = (0.7, -0.5, 0.6)
    numeric = fd_hessian(lambda point: static_potential(frame, point, rho=2.0), x, 0.02)
    closed = hessian_case1(b, x, 0.0, 0.0, 2.0, rho=2.0)
    assert np.allclose(closed.H.imag, 0.0, atol=1e-15)
    assert _relative(numeric, closed.H.real) <= 1e-6


def test_static_potential_of_sphere_grows_linearly():
    b = 1.3
    frame = EllipsoidalFrame(b=(b, b, b), m=(1.0, 1.0, 1.0))
    near = np.array([0.5, 0.2, -0.4])
    far = np.array([1.0, -0.7, 0.3])
    difference = static_potential(frame, far) - static_potential(frame, near)
    expected = (np.linalg.norm(far) - np.linalg.norm(near)) / (8.0 * math.pi * b * b)
    assert difference == pytest.approx(expected, rel=1e-9)


def test_static_general_hessian_matches_fd_hessian_of_potential():
    frame = EllipsoidalFrame(b=(1.0, 1.4, 0.8), m=(1.0, 0.8, 1.2))
    x = (0.6, 0.5, -0.7)
    numeric = fd_hessian(lambda point: static_potential(frame, point), x, 0.02)
    general = hessian_general(frame, x, 0.0, 0.0, 2.0)
    assert _relative(numeric, general.H.real) <= 1e-5


def test_static_potential_needs_positive_coefficients():
    frame = EllipsoidalFrame(b=(1.0, 1.0, 1.0), m=(1.0, 1.0, 0.0))
    with pytest.raises(DomainError):
        static_potential(frame, (0.5, 0.5, 0.5))


def test_weighted_trace_recovers_scalar_solution():
    rng = np.random.default_rng(99)
    for _ in range(100):
        b = tuple(rng.uniform(0.8, 2.0, size=3))
        m = tuple(rng.uniform(0.3, 1.5, size=3))
        x = rng.normal(size=3)
        omega = float(rng.uniform(0.0, 5.0))
        beta = float(rng.uniform(0.0, 0.01))
        frame = EllipsoidalFrame(b=b, m=m)
        value = hessian_general(frame, x, omega, beta, 2.0)
        expected = scalar_solution(b, 1.0, beta, 2.0, x, omega)
        assert value.weighted_trace(m) == pytest.approx(expected, rel=1e-8)

        sphere = hessian_case1(b[0], x, omega, beta, 2.0)
        assert sphere.weighted_trace((1.0, 1.0, 1.0)) == pytest.approx(
            scalar_solution((b[0],) * 3, 1.0, beta, 2.0, x, omega), rel=1e-12
        )
        plane = hessian_case2(b[0], b[2], x, omega, beta, 2.0)
        assert plane.weighted_trace((1.0, 1.0, 0.0)) == pytest.approx(
            scalar_solution((b[0], b[0], b[2]), 1.0, beta, 2.0, x, omega), rel=1e-12
        )


def test_case2_axis_limit():
    x_axis = (0.0, 0.0, 0.8)
    on_axis = hessian_case2(1.1, 0.7, x_axis, 2.0, 0.0, 2.0)
    phi = scalar_solution((1.1, 1.1, 0.7), 1.0, 0.0, 2.0, x_axis, 2.0)
    assert on_axis.on_axis
    assert np.allclose(on_axis.H, 0.5 * phi * np.eye(2), rtol=1e-14, atol=0.0)

    nearby = hessian_case2(1.1, 0.7, (0.8e-6, 0.0, 0.8), 2.0, 0.0, 2.0)
    assert not nearby.on_axis
    assert _relative(nearby.H, on_axis.H) <= 1e-5


def test_case2_embeds_into_full_tensor():
    value = hessian_case2(1.1, 0.7, (0.3, 0.4, 0.5), 1.0, 0.0, 2.0)
    full = value.full()
    assert full.shape == (3, 3)
    assert np.all(full[2, :] == 0.0)
    assert np.array_equal(full[:2, :2], value.H)


def test_general_evaluator_rejects_degenerate_axis():
    frame = EllipsoidalFrame(b=(1.0, 1.0, 1.0), m=(1.0, 1.0, 0.0))
    with pytest.raises(DegenerateDirectionError):
        hessian_general(frame, (0.0, 0.0, 1.0), 1.0, 0.0, 2.0)


def test_hessian_at_source_rejected():
    with pytest.raises(SingularPointError):
        hessian_case1(1.0, (0.0, 0.0, 0.0), 1.0, 0.0, 2.0)
