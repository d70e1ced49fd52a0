"""Shared pytest fixtures."""

import pytest

from giantcz.hilbert import enumerate_basis

from tests.fixtures.sample_systems import create_sample_system, create_small_gate


@pytest.fixture
def small_system():
    return create_sample_system()


@pytest.fixture
def two_excitation_basis(small_system):
    return enumerate_basis(small_system, 2)


@pytest.fixture
def small_gate():
    return create_small_gate()


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    """Keep tests independent of the caller's GIANTCZ_* variables."""
    monkeypatch.delenv("GIANTCZ_THREADS", raising=False)
    monkeypatch.setenv("GIANTCZ_OUTPUT_DIR", str(tmp_path / "results"))
