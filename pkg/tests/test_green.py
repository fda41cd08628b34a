from __future__ import annotations

import math

import numpy as np
import pytest

from anisogreen.core.exceptions import ConfigError, OutOfRegimeError, SingularPointError
from anisogreen.core.worker_pool import WorkerPool
from anisogreen.schemas.medium import MediumKind
from anisogreen.services.attenuation import wavenumber
from anisogreen.services.christoffel import mode_constants
from anisogreen.services.green import (
    arrival_times,
    check_regime,
    green_grid,
    green_isotropic,
    green_medium1,
    green_medium2,
    green_medium3,
    green_tensor,
    time_domain,
)
from anisogreen.services.scalarwave import phi
from anisogreen.services.wavelets import RickerWavelet
from tests.conftest import make_medium


def _points(count: int, seed: int = 5) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-2.0, 2.0, size=(count, 3))


def test_medium1_is_diagonal_in_scalar_solutions(medium1):
    x = (0.4, -0.9, 0.7)
    value = green_medium1(medium1, x, 2.0)
    expected = np.diag([phi(medium1, mode, x, 2.0) for mode in (1, 2, 3)])
    assert np.array_equal(value.G, expected)
    assert value.kind is MediumKind.MEDIUM_I


def test_green_tensor_is_symmetric(any_medium):
    for x in _points(10):
        G = green_tensor(any_medium, x, 1.7).G
        assert np.allclose(G, G.T, rtol=0.0, atol=1e-15 * np.abs(G).max())


def test_green_tensor_is_even_in_position(any_medium):
    for x in _points(10, seed=8):
        forward = green_tensor(any_medium, x, 2.3).G
        backward = green_tensor(any_medium, -x, 2.3).G
        assert np.allclose(forward, backward, rtol=1e-13, atol=0.0)


def test_green_tensor_is_hermitian_in_frequency():
    medium = make_medium(MediumKind.MEDIUM_III, beta=(0.01, 0.02, 0.015), gamma=1.5)
    for x in _points(5, seed=2):
        forward = green_tensor(medium, x, 3.0).G
        backward = green_tensor(medium, x, -3.0).G
        assert np.allclose(backward, forward.conj(), rtol=1e-12, atol=0.0)


def test_medium2_axial_component_is_first_mode(medium2):
    x = (0.5, 0.3, -0.8)
    value = green_medium2(medium2, x, 1.0)
    assert value.G[2, 2] == pytest.approx(phi(medium2, 1, x, 1.0), rel=1e-14)
    assert value.G[0, 2] == 0.0
    assert value.G[1, 2] == 0.0


def test_medium3_reduces_to_isotropic_exactly():
    medium = make_medium(MediumKind.MEDIUM_III, c66=1.5, beta=(0.01, 0.02, 0.02))
    reference = make_medium(MediumKind.ISOTROPIC, c11=6.0, c44=1.5, beta=(0.01, 0.02, 0.02))
    assert medium.kind is MediumKind.ISOTROPIC
    assert medium.constants == reference.constants
    rng = np.random.default_rng(17)
    for x in _points(50, seed=17):
        omega = float(rng.uniform(0.1, 6.0))
        assert np.array_equal(
            green_medium3(medium, x, omega).G, green_isotropic(reference, x, omega).G
        )


def test_isotropic_requires_matching_shear_constants(medium3):
    with pytest.raises(ConfigError, match="isotropic"):
        green_isotropic(medium3, (1.0, 0.0, 0.0), 1.0)


def test_assembler_checks_medium_kind(medium1):
    with pytest.raises(ConfigError, match="medium kind"):
        green_medium2(medium1, (1.0, 0.0, 0.0), 1.0)


def test_static_isotropic_tensor_is_kelvin_solution(isotropic):
    x = np.array([0.3, -0.6, 0.9])
    r = float(np.linalg.norm(x))
    unit = x / r
    mu = isotropic.constants["c44"]
    lam = isotropic.constants["c11"] - 2.0 * mu
    kelvin = (
        (lam + 3.0 * mu) * np.eye(3) + (lam + mu) * np.outer(unit, unit)
    ) / (8.0 * math.pi * mu * (lam + 2.0 * mu) * r)
    G = green_isotropic(isotropic, x, 0.0).G
    assert np.allclose(G.real, kelvin, rtol=1e-12, atol=0.0)
    assert np.allclose(G.imag, 0.0, atol=1e-15)


def test_isotropic_far_field_decays_as_inverse_distance(isotropic):
    direction = np.array([0.48, 0.6, 0.64])
    radii = np.logspace(1.0, 2.0, 12)
    amplitude = [
        np.linalg.norm(green_isotropic(isotropic, r * direction, 30.0).G) for r in radii
    ]
    slope = np.polyfit(np.log(radii), np.log(amplitude), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.01)


def test_grid_matches_pointwise_and_keeps_order(medium2):
    nodes = _points(12, seed=21)
    with WorkerPool(max_workers=3) as pool:
        values = green_grid(medium2, nodes, 1.5, pool)
    assert values.shape == (12, 3, 3)
    for index, node in enumerate(nodes):
        assert np.array_equal(values[index], green_tensor(medium2, node, 1.5).G)


def test_grid_error_names_node(medium1):
    nodes = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(SingularPointError, match="node 1"):
        green_grid(medium1, nodes, 1.0)


def test_regime_check_lists_all_offending_frequencies():
    medium = make_medium(MediumKind.MEDIUM_I, beta=(0.1, 0.0, 0.0))
    with pytest.raises(OutOfRegimeError) as info:
        check_regime(medium, [1.0, 5.0, 20.0, 50.0])
    assert info.value.frequencies == (20.0, 50.0)


def test_seismogram_envelopes_peak_at_travel_times(medium1):
    x = (3.0, 2.0, 1.5)
    wavelet = RickerWavelet(peak_frequency=2.0)
    dt = 0.005
    record = time_domain(medium1, x, wavelet, dt, 6.0)
    taus = arrival_times(medium1, x)
    for k in range(3):
        assert abs(record.peak_time(k, k) - (wavelet.time_delay + taus[k])) <= dt


def test_seismogram_amplitude_matches_geometric_spreading(medium1):
    x = (3.0, 2.0, 1.5)
    wavelet = RickerWavelet(peak_frequency=2.0)
    record = time_domain(medium1, x, wavelet, 0.005, 6.0)
    taus = arrival_times(medium1, x)
    for k in range(3):
        b = mode_constants(medium1, k + 1).b_product
        expected = 1.0 / (4.0 * math.pi * medium1.rho * b * taus[k])
        assert record.samples[k, k].max() == pytest.approx(expected, rel=0.02)


def test_seismogram_is_quiet_before_first_arrival(medium1):
    x = (3.0, 2.0, 1.5)
    wavelet = RickerWavelet(peak_frequency=2.0)
    record = time_domain(medium1, x, wavelet, 0.005, 6.0)
    onset = min(arrival_times(medium1, x)) + wavelet.time_delay - 1.2 * wavelet.width
    early = record.times < onset
    energy = np.sum(record.samples[:, :, early] ** 2)
    assert energy < 0.01 * np.sum(record.samples**2)


def test_viscous_seismogram_is_attenuated():
    x = (3.0, 2.0, 1.5)
    wavelet = RickerWavelet(peak_frequency=1.0)
    elastic = make_medium(MediumKind.MEDIUM_I)
    lossy = make_medium(MediumKind.MEDIUM_I, beta=(0.01, 0.01, 0.01))
    clean = time_domain(elastic, x, wavelet, 0.01, 10.0)
    damped = time_domain(lossy, x, wavelet, 0.01, 10.0)
    for k in range(3):
        assert np.abs(damped.samples[k, k]).max() < np.abs(clean.samples[k, k]).max()


def test_coarse_sampling_rejected(medium1):
    with pytest.raises(ConfigError, match="does not resolve"):
        time_domain(medium1, (1.0, 1.0, 1.0), RickerWavelet(peak_frequency=20.0), 0.05, 2.0)


def test_viscous_peak_ratio_matches_gaussian_broadening():
    # γ = 2 时损耗因子为 exp(-βτω²/2)，与 Ricker 谱相乘仍为高斯型
    x = (3.0, 2.0, 1.5)
    beta = 1e-3
    wavelet = RickerWavelet(peak_frequency=2.0)
    elastic = make_medium(MediumKind.MEDIUM_I)
    lossy = make_medium(MediumKind.MEDIUM_I, beta=(beta, beta, beta))
    clean = time_domain(elastic, x, wavelet, 0.005, 6.0)
    damped = time_domain(lossy, x, wavelet, 0.005, 6.0)
    scale = 2.0 * math.pi**2 * wavelet.peak_frequency**2
    for k, tau in enumerate(arrival_times(elastic, x)):
        ratio = damped.samples[k, k].max() / clean.samples[k, k].max()
        assert ratio == pytest.approx((1.0 + beta * tau * scale) ** -1.5, rel=0.02)


def test_viscous_decay_between_two_radii_follows_attenuation():
    near = np.array([1.5, 1.0, 0.75])
    far = 2.0 * near
    beta = 5e-4
    wavelet = RickerWavelet(peak_frequency=2.0)
    elastic = make_medium(MediumKind.MEDIUM_I)
    lossy = make_medium(MediumKind.MEDIUM_I, beta=(beta, beta, beta))
    # Ricker 谱按振幅加权的均方角频率为 1.5·(2πf0)²
    omega = math.sqrt(1.5) * 2.0 * math.pi * wavelet.peak_frequency
    decay = wavenumber(omega, beta, 2.0).attenuation
    ratios = []
    for x in (near, far):
        clean = time_domain(elastic, x, wavelet, 0.005, 6.0)
        damped = time_domain(lossy, x, wavelet, 0.005, 6.0)
        ratios.append(
            [damped.samples[k, k].max() / clean.samples[k, k].max() for k in range(3)]
        )
    delta = np.subtract(arrival_times(elastic, far), arrival_times(elastic, near))
    for k in range(3):
        expected = math.exp(-decay * delta[k])
        assert expected < 0.96
        assert ratios[1][k] / ratios[0][k] == pytest.approx(expected, rel=0.02)


def test_viscous_seismogram_is_quiet_before_first_arrival():
    x = (3.0, 2.0, 1.5)
    beta = 5e-4
    wavelet = RickerWavelet(peak_frequency=2.0)
    assert beta * 2.0 * math.pi * wavelet.peak_frequency <= 1e-2
    medium = make_medium(MediumKind.MEDIUM_I, beta=(beta, beta, beta))
    record = time_domain(medium, x, wavelet, 0.005, 6.0)
    onset = min(arrival_times(medium, x)) + wavelet.time_delay - 1.2 * wavelet.width
    early = record.times < onset
    energy = np.sum(record.samples[:, :, early] ** 2)
    assert energy < 0.01 * np.sum(record.samples**2)
