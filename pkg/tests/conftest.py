"""Shared fixtures: one pipeline run per level, reused across test modules."""

import pytest

from halfint.cli import JobConfig, kohnen_basis

ACCEPTANCE_LEVELS = (11, 15, 21, 33, 35, 37)


@pytest.fixture(scope="session")
def pipeline_runs():
    """Full pipeline output at precision 40 for every acceptance level."""
    runs = {}
    for level in ACCEPTANCE_LEVELS:
        runs[level] = kohnen_basis(JobConfig(level=level, prec=40))
    return runs


@pytest.fixture(scope="session")
def level15_run():
    return kohnen_basis(JobConfig(level=15, prec=100))
