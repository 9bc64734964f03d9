"""Shared fixtures: the presentations the engine is exercised on"""

import sys
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eqloop.extractors.presentation_extractor import parse_presentation

PRESENTATION_DIR = project_root / "data" / "presentations"


def load_presentation(name: str):
    return parse_presentation((PRESENTATION_DIR / name).read_text(encoding="utf-8"))


@pytest.fixture
def presentation_dir() -> Path:
    return PRESENTATION_DIR


@pytest.fixture
def s2_circle():
    """H = k[x,u]/(x² - u²), R = k[u], ε(x) = -u"""
    return load_presentation("s2-circle.alg")


@pytest.fixture
def point():
    """H = R = k[u]"""
    return load_presentation("point.alg")


@pytest.fixture
def s2_trivial():
    """H = k[x]/(x²), deg x = 2, R = k"""
    return load_presentation("s2-trivial.alg")


@pytest.fixture
def lambda_uxy():
    """⋀(u, x, y), dy = ux"""
    return load_presentation("lambda-uxy.alg")


@pytest.fixture
def lambda_e1e2():
    """⋀(e1, e2) with zero differential"""
    return load_presentation("lambda-e1e2.alg")
