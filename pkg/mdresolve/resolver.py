"""High-level Resolver facade for mdresolve."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

from .config import RunConfig
from .engine.answers import AUTO, minimal_instances, resolved_answers
from .engine.closure import (
    EquivPartition,
    attribute_closure,
    closure_of_set,
    tuple_attribute_closure,
    tuple_closure,
)
from .engine.instance import Instance, Value
from .engine.mdspec import SUPPORTED_CLASSES, MDClass, MDSet
from .engine.query import ConjunctiveQuery
from .engine.resolve import (
    DEFAULT_DEPTH,
    DEFAULT_LIMIT,
    DEFAULT_MAX_STEPS,
    ResolutionResult,
    SatisfactionReport,
    chase,
    check_fan_pair,
    check_pair,
    oracle_mris,
)
from .engine.rewrite import RewrittenQuery, rewrite
from .exceptions import ConfigError
from .io.csv_loader import CSVLoader
from .io.md_parser import load_mds
from .io.query_parser import load_query, parse_query
from .io.repository import FixtureRepository

logger = logging.getLogger(__name__)

CLOSURE_KINDS = ("tuple", "set", "attribute", "tuple-attribute")


class Resolver:
    """
    One instance together with its MD set.

    Examples:
        >>> r = Resolver.from_fixture("simple_cycle")
        >>> str(r.classify())
        'SimpleCycle'
        >>> r.mris().count
        16
    """

    def __init__(
        self,
        instance: Instance,
        mds: MDSet,
        queries: Optional[dict[str, ConjunctiveQuery]] = None,
    ):
        self.instance = instance
        self.mds = mds
        self.queries = dict(queries or {})

    @classmethod
    def from_paths(
        cls,
        schema: Path | str,
        data: Optional[Path | str],
        mds: Path | str,
    ) -> Resolver:
        """Load a schema file, a directory of CSVs and an MD file."""
        instance = CSVLoader.load_directory(schema, data)
        return cls(instance, load_mds(mds, instance.schema))

    @classmethod
    def from_fixture(cls, name: str) -> Resolver:
        """Load a bundled fixture by name."""
        fixture = FixtureRepository.load(name)
        return cls(fixture.instance, fixture.mds, fixture.queries)

    @classmethod
    def from_config(cls, config: RunConfig) -> Resolver:
        """
        Load from a run config: its fixture if set, then explicit paths on top.

        Raises:
            ConfigError: If neither a fixture nor schema and MD paths are given,
                or a path does not exist.
        """
        config.check_paths("schema", "data", "mds")
        if config.fixture:
            resolver = cls.from_fixture(config.fixture)
            if config.schema or config.data or config.mds:
                root = FixtureRepository.path(config.fixture)
                resolver = cls.from_paths(
                    config.schema or root / "schema.sch",
                    config.data or root,
                    config.mds or root / "mds.md",
                )
            return resolver
        if config.schema is None:
            raise ConfigError("schema", "required unless --fixture is given")
        if config.mds is None:
            raise ConfigError("mds", "required unless --fixture is given")
        return cls.from_paths(config.schema, config.data, config.mds)

    def query(self, source: str | Path) -> ConjunctiveQuery:
        """A named fixture query, a ``.cq`` path, or query text."""
        if isinstance(source, str) and source in self.queries:
            return self.queries[source]
        path = Path(source)
        if path.suffix == ".cq" or path.exists():
            return load_query(path, self.instance.schema)
        return parse_query(str(source), self.instance.schema)

    def load_other(self, data_dir: Path | str) -> Instance:
        """Another instance over this schema, read from a CSV directory."""
        return CSVLoader.load_dir(self.instance.schema, data_dir)

    def classify(self) -> MDClass:
        return self.mds.md_class

    def closure(self, kind: str = "tuple-attribute", md_index: Optional[int] = None) -> EquivPartition:
        """
        One of the closures of this instance.

        Args:
            kind: ``tuple`` (of one MD), ``set`` (join over all MDs),
                ``attribute`` or ``tuple-attribute``.
            md_index: MD for the tuple closure (default 0).

        Raises:
            ConfigError: If md_index is not the index of an MD.
        """
        if kind == "tuple":
            index = 0 if md_index is None else md_index
            if not 0 <= index < len(self.mds):
                raise ConfigError("md", f"expected an MD index in 0..{len(self.mds) - 1}, got {index}")
            return tuple_closure(self.instance, self.mds[index])
        if kind == "set":
            return closure_of_set(tuple_closure(self.instance, md) for md in self.mds)
        if kind == "attribute":
            return attribute_closure(self.mds)
        if kind == "tuple-attribute":
            hsc_mode = self.mds.md_class is not MDClass.NON_INTERACTING
            return tuple_attribute_closure(self.instance, self.mds, hsc_mode)
        raise ValueError(f"Unknown closure kind: {kind!r}")

    def chase(self, max_steps: int = DEFAULT_MAX_STEPS) -> list[Instance]:
        return chase(self.instance, self.mds, max_steps)

    def resolve(self, max_steps: int = DEFAULT_MAX_STEPS) -> Instance:
        return self.chase(max_steps)[-1]

    def mris(self, limit: int = DEFAULT_LIMIT, depth: int = DEFAULT_DEPTH) -> ResolutionResult:
        """MRIs by closure, or by the oracle for classes without a closure form."""
        if self.mds.md_class not in SUPPORTED_CLASSES:
            logger.info("%s MD set: falling back to the oracle", self.mds.md_class)
        return minimal_instances(self.instance, self.mds, limit, depth)

    def oracle(self, depth: int = DEFAULT_DEPTH) -> ResolutionResult:
        return oracle_mris(self.instance, self.mds, depth)

    def check(self, other: Instance) -> SatisfactionReport:
        return check_pair(self.instance, other, self.mds)

    def check_fan(self, other: Instance) -> SatisfactionReport:
        return check_fan_pair(self.instance, other, self.mds)

    def answer(
        self,
        q: ConjunctiveQuery,
        strategy: str = AUTO,
        *,
        limit: int = DEFAULT_LIMIT,
        depth: int = DEFAULT_DEPTH,
    ) -> set[tuple[Value, ...]]:
        return resolved_answers(q, self.instance, self.mds, strategy, limit=limit, depth=depth)

    def rewrite(self, q: ConjunctiveQuery) -> RewrittenQuery:
        return rewrite(q, self.mds, self.instance.schema)
