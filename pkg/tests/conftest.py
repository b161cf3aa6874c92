"""Shared fixtures for the mdresolve test suite."""

from __future__ import annotations

import pytest

from mdresolve import Resolver
from mdresolve.engine.instance import Instance, Schema
from mdresolve.engine.sampling import relation
from mdresolve.io.md_parser import parse_mds
from mdresolve.io.repository import FixtureRepository


@pytest.fixture(autouse=True)
def _fresh_fixture_index():
    FixtureRepository.clear_cache()
    yield
    FixtureRepository.clear_cache()


@pytest.fixture
def bundled():
    """Load a bundled fixture as a Resolver."""
    return Resolver.from_fixture


@pytest.fixture
def r_abc() -> Schema:
    return Schema((relation("R", "A", "B", "C"),))


@pytest.fixture
def build():
    """Instance plus MD set from a schema, row dicts and DSL text."""

    def _build(schema: Schema, rows: dict, mds_text: str):
        d = Instance(schema, rows)
        return d, parse_mds(mds_text, schema)

    return _build
