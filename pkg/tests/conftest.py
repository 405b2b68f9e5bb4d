"""Shared fixtures: paths into tests/fixtures and parsed models."""

from pathlib import Path

import pytest
from click.testing import CliRunner

from disreqc.analysis_pipeline import run_pipeline
from disreqc.requirements_dsl import parse

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"
RETAIL = FIXTURES / "retail.dis"
RULES = FIXTURES / "rules"
CATALOGS = FIXTURES / "catalogs"


@pytest.fixture(scope="session")
def retail_text() -> str:
    return RETAIL.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def retail_model(retail_text):
    result = parse(retail_text, filename=str(RETAIL))
    assert result.model is not None, [str(d) for d in result.diagnostics]
    return result.model


@pytest.fixture(scope="session")
def retail_outcome(retail_model):
    outcome = run_pipeline(retail_model)
    assert outcome.ok
    return outcome


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def golden_path(name: str) -> Path:
    return GOLDEN / name


def read_golden(name: str) -> str:
    return golden_path(name).read_text(encoding="utf-8")
