from fractions import Fraction

import pytest
from pydantic import ValidationError as PydanticValidationError

from app.core.config import Settings


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("LAGCONF_WORKERS", "3")
    monkeypatch.setenv("LAGCONF_SERIES_ORDER", "5/2")
    monkeypatch.setenv("LAGCONF_MAX_WINDOW", "16")
    settings = Settings()
    assert settings.workers == 3
    assert settings.series_order_fraction == Fraction(5, 2)
    assert settings.max_window == 16


def test_defaults(monkeypatch):
    for name in ("LAGCONF_SERIES_ORDER", "LAGCONF_NEWTON_TOLERANCE", "LAGCONF_RELATION_TOLERANCE"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings(_env_file=None)
    assert settings.series_order == "2"
    assert settings.newton_tolerance == 1e-10
    assert settings.relation_tolerance == 1e-9


@pytest.mark.parametrize("name, value", [
    ("LAGCONF_WORKERS", "0"),
    ("LAGCONF_SERIES_ORDER", "-1"),
    ("LAGCONF_ZERO_TOLERANCE", "0"),
])
def test_invalid_values_rejected(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(PydanticValidationError):
        Settings()
