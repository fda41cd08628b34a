from __future__ import annotations

import cmath
import math

import pytest

from anisogreen.core.exceptions import OutOfRegimeError, SingularPointError
from anisogreen.services.scalarwave import (
    TAU_MIN,
    mode_travel_time,
    phi,
    scalar_solution,
    travel_time,
)
from tests.conftest import make_medium


def test_travel_time_is_ellipsoidal_distance():
    assert travel_time((1.0, 2.0, 3.0), (1.0, 2.0, 3.0)) == pytest.approx(math.sqrt(3.0))
    assert travel_time((2.0, 2.0, 2.0), (0.0, 0.0, -4.0)) == pytest.approx(2.0)


def test_lossless_solution_is_outgoing_spherical_wave():
    b = (1.5, 2.0, 2.5)
    x = (0.4, -0.3, 1.1)
    tau = travel_time(b, x)
    value = scalar_solution(b, 2.0, 0.0, 2.0, x, 3.0)
    expected = cmath.exp(3j * tau) / (4.0 * math.pi * 1.5 * 2.0 * 2.5 * 2.0 * tau)
    assert value == pytest.approx(expected, rel=1e-14)


def test_static_limit_is_real_and_positive():
    value = scalar_solution((1.0, 1.0, 1.0), 1.0, 0.0, 2.0, (0.0, 0.5, 0.0), 0.0)
    assert value == pytest.approx(1.0 / (4.0 * math.pi * 0.5), rel=1e-14)


def test_loss_decays_amplitude_with_distance():
    b = (1.0, 1.0, 1.0)
    near = scalar_solution(b, 1.0, 0.01, 2.0, (1.0, 0.0, 0.0), 5.0)
    far = scalar_solution(b, 1.0, 0.01, 2.0, (4.0, 0.0, 0.0), 5.0)
    lossless_ratio = 4.0
    assert abs(near) / abs(far) > lossless_ratio


def test_solution_is_hermitian_in_frequency():
    b = (1.0, 1.2, 0.8)
    x = (0.3, 0.2, 0.5)
    forward = scalar_solution(b, 1.0, 0.02, 1.5, x, 2.0)
    backward = scalar_solution(b, 1.0, 0.02, 1.5, x, -2.0)
    assert backward == pytest.approx(forward.conjugate(), rel=1e-12)


def test_source_point_rejected():
    with pytest.raises(SingularPointError, match="source point"):
        scalar_solution((1.0, 1.0, 1.0), 1.0, 0.0, 2.0, (0.0, 0.0, 0.1 * TAU_MIN), 1.0)


def test_regime_violation_propagates():
    with pytest.raises(OutOfRegimeError):
        scalar_solution((1.0, 1.0, 1.0), 1.0, 0.5, 2.0, (1.0, 0.0, 0.0), 4.0)


def test_phi_uses_mode_velocities(medium1):
    x = (0.7, -0.2, 0.4)
    c = medium1.constants
    b = (math.sqrt(c["c55"]), math.sqrt(c["c44"]), math.sqrt(c["c33"]))
    assert phi(medium1, 3, x, 1.3) == pytest.approx(
        scalar_solution(b, medium1.rho, 0.0, 2.0, x, 1.3), rel=1e-14
    )
    assert mode_travel_time(medium1, 3, x).value == pytest.approx(travel_time(b, x))


def test_phi_picks_mode_loss_ratio():
    medium = make_medium("III", beta=(0.01, 0.0, 0.02))
    x = (0.5, 0.5, 0.5)
    lossless = make_medium("III")
    assert phi(medium, 2, x, 2.0) == phi(lossless, 2, x, 2.0)
    assert phi(medium, 1, x, 2.0) != phi(lossless, 1, x, 2.0)
