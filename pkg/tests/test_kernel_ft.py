from __future__ import annotations

import numpy as np
import pytest

from anisogreen.core.exceptions import DomainError
from anisogreen.services.attenuation import loss_symbol
from anisogreen.services.validation import kernel_ft_oracle


@pytest.mark.parametrize("gamma", [1.5, 2.0, 2.5, 3.0])
def test_loss_symbol_matches_kernel_transform(gamma):
    for omega in np.logspace(-1.0, 2.0, 10):
        oracle = kernel_ft_oracle(gamma, float(omega))
        symbol = loss_symbol(gamma, float(omega))
        assert abs(symbol - oracle.value) <= 1e-6 * abs(oracle.value)


def test_transform_reports_error_estimate():
    result = kernel_ft_oracle(1.5, 3.0)
    assert result.error <= 1e-8 * abs(result.value)
    assert result.window == pytest.approx(1.0 / 3.0)


def test_transform_is_hermitian():
    forward = kernel_ft_oracle(2.5, 4.0).value
    backward = kernel_ft_oracle(2.5, -4.0).value
    assert backward == pytest.approx(forward.conjugate(), rel=1e-6)


@pytest.mark.parametrize("omega", [0.0, float("inf")])
def test_transform_needs_finite_nonzero_frequency(omega):
    with pytest.raises(DomainError, match="non-zero omega"):
        kernel_ft_oracle(2.0, omega)
