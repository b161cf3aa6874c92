"""Repository of bundled worked-example fixtures."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Optional

from ..engine.instance import Instance
from ..engine.mdspec import MDSet
from ..engine.query import ConjunctiveQuery
from ..exceptions import FixtureNotFoundError
from .csv_loader import CSVLoader
from .md_parser import load_mds
from .query_parser import load_query

SCHEMA_FILE = "schema.sch"
MDS_FILE = "mds.md"


class Fixture(NamedTuple):
    """A loaded fixture: instance, MD set and its named queries."""
    name: str
    instance: Instance
    mds: MDSet
    queries: dict[str, ConjunctiveQuery]


class FixtureRepository:
    """
    Access the fixtures bundled under ``mdresolve/data/fixtures``.

    Each fixture is a directory holding ``schema.sch``, ``mds.md``, one
    ``<Relation>.csv`` per non-empty relation and optional ``*.cq`` queries.
    """

    _index: Optional[dict[str, dict]] = None

    @classmethod
    def _root(cls):
        return resources.files("mdresolve.data").joinpath("fixtures")

    @classmethod
    def _get_index(cls) -> dict[str, dict]:
        """Load and cache the fixture index."""
        if cls._index is None:
            try:
                content = cls._root().joinpath("index.json").read_text(encoding="utf-8")
                cls._index = json.loads(content)
            except (FileNotFoundError, AttributeError, TypeError):
                cls._index = {}
        return cls._index

    @classmethod
    def available(cls) -> dict[str, dict]:
        """Fixture names mapped to their index metadata."""
        return cls._get_index().copy()

    @classmethod
    def path(cls, name: str) -> Path:
        """
        Directory of a fixture on disk.

        Raises:
            FixtureNotFoundError: If the fixture is not in the index.
        """
        index = cls._get_index()
        if name not in index:
            raise FixtureNotFoundError(name, sorted(index))
        return Path(str(cls._root().joinpath(name)))

    @classmethod
    def queries(cls, name: str) -> list[Path]:
        return sorted(cls.path(name).glob("*.cq"))

    @classmethod
    def load(cls, name: str) -> Fixture:
        """Load a fixture's instance, MD set and queries."""
        root = cls.path(name)
        instance = CSVLoader.load_directory(root / SCHEMA_FILE, root)
        mds = load_mds(root / MDS_FILE, instance.schema)
        queries = {p.stem: load_query(p, instance.schema) for p in cls.queries(name)}
        return Fixture(name, instance, mds, queries)

    @classmethod
    def clear_cache(cls):
        cls._index = None
