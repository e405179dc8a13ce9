"""
Shared fixtures: standard configurations, seeded randomness and profiles
"""

import random
from fractions import Fraction

import pytest

from app.services.configuration import make_config
from app.services.profiles import parse_profile


@pytest.fixture
def two_circle_config():
    """k = 2, B = 2/5, C = 1/5, a = 1/10"""
    return make_config(2, Fraction(2, 5), Fraction(1, 10))


@pytest.fixture
def three_circle_config():
    """k = 3, B = 3/10, C = 1/5, a = 1/20"""
    return make_config(3, Fraction(3, 10), Fraction(1, 20))


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def profile():
    """Factory parsing the profile grammar"""
    return parse_profile


@pytest.fixture
def single_worker(monkeypatch):
    """Keep parallel sweeps in-process"""
    from app.core.config import settings
    monkeypatch.setattr(settings, "workers", 1)
    return settings
