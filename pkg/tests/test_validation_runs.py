from __future__ import annotations

import logging

import pytest

from anisogreen.core.exceptions import ConfigError
from anisogreen.schemas.run_config import TaskKind
from anisogreen.services.config_parser import parse_text
from anisogreen.services.validation import runs
from anisogreen.services.validation.residual import green_sampler
from anisogreen.services.validation.runs import (
    ValidationKind,
    residual_envelope,
    run_validation,
)
from tests.conftest import MINIMAL_MEDIUM_I_CONFIG


def _config(extra: str = ""):
    return parse_text(MINIMAL_MEDIUM_I_CONFIG + extra, default_task=TaskKind.VALIDATE)


def test_residual_needs_positive_frequency():
    with pytest.raises(ConfigError) as info:
        run_validation("residual", _config())
    assert info.value.key == "frequency.omega"
    with pytest.raises(ConfigError, match="omega > 0"):
        run_validation("residual", _config("frequency.omega = 0\n"))


def test_residual_run_passes_for_elastic_medium(caplog):
    config = _config("frequency.omega = 2\nvalidation.samples = 3\n")
    with caplog.at_level(logging.INFO, logger="anisogreen.validation"):
        outcome = run_validation(ValidationKind.RESIDUAL, config)
    assert outcome.failure is None
    assert len(outcome.table) == 3 * 3
    assert "3 points" in outcome.summary
    assert any("通过" in record.getMessage() for record in caplog.records)


LOSSY_RESIDUAL = (
    "frequency.omega = 2\nvalidation.samples = 3\n"
    "medium.beta1 = 0.001\nmedium.beta2 = 0.001\nmedium.beta3 = 0.001\n"
)


def test_residual_envelope_is_set_by_loss_term():
    config = _config(LOSSY_RESIDUAL)
    assert residual_envelope(config, 2.0) == pytest.approx(10.0 * (1e-3 * 2.0) ** 2)


def test_residual_run_passes_for_lossy_medium():
    outcome = run_validation(ValidationKind.RESIDUAL, _config(LOSSY_RESIDUAL))
    assert outcome.failure is None
    table = outcome.table
    finest = table[table["h"] == table["h"].min()]
    assert finest["residual"].max() < residual_envelope(_config(LOSSY_RESIDUAL), 2.0)


def test_residual_run_rejects_lossless_field_for_lossy_medium(monkeypatch):
    # 用无损闭式解代替有损解，残差为 β|Â| 量级
    def lossless(medium, omega):
        return green_sampler(medium.model_copy(update={"beta": (0.0, 0.0, 0.0)}), omega)

    monkeypatch.setattr(runs, "green_sampler", lossless)
    outcome = run_validation(ValidationKind.RESIDUAL, _config(LOSSY_RESIDUAL))
    assert outcome.failure is not None
    assert outcome.failure.exit_code == 4
    assert "loss envelope" in str(outcome.failure)


def test_kernel_run_defaults_to_log_spaced_frequencies():
    outcome = run_validation("kernel-ft", _config("medium.gamma = 1.5\nvalidation.samples = 4\n"))
    assert outcome.failure is None
    expected = [1.0, 10 ** (2 / 3), 10 ** (4 / 3), 100.0]
    assert outcome.table["omega"].tolist() == pytest.approx(expected)
    assert outcome.table["relative_error"].max() <= 1e-6


def test_bad_stencil_order_is_config_error():
    with pytest.raises(ConfigError) as info:
        run_validation("eigen", _config("validation.fd_order = 3\n"))
    assert info.value.key == "validation.fd_order"
