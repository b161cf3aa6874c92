"""IO layer for mdresolve - all file I/O operations."""

from .csv_loader import CSVLoader, dump_csv, load_csv
from .json_export import dumps, result_to_json
from .md_parser import load_mds, parse_mds
from .query_parser import load_query, parse_query
from .repository import Fixture, FixtureRepository
from .schema_parser import load_schema, parse_schema

__all__ = [
    "CSVLoader",
    "dump_csv",
    "load_csv",
    "dumps",
    "result_to_json",
    "load_mds",
    "parse_mds",
    "load_query",
    "parse_query",
    "Fixture",
    "FixtureRepository",
    "load_schema",
    "parse_schema",
]

# load_config_file is not exported by default since it requires PyYAML
# Use: from mdresolve.io.yaml_config import load_config_file
