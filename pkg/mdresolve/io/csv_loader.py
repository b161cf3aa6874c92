"""CSV ingestion and emission for relational instances."""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path
from typing import BinaryIO, Mapping, Optional, Union

from ..engine.instance import INTEGER, Instance, RelationSchema, Schema, Value, check_tag
from ..exceptions import CSVFormatError, DuplicateTupleIdError, ValueTagError
from .schema_parser import load_schema, parse_schema

ID_COLUMN = "_id"


def _convert(raw: str, rel: RelationSchema, index: int, row_no: int) -> Value:
    attr = rel.attributes[index]
    where = f"{attr} at row {row_no}"
    if attr.tag == INTEGER:
        try:
            value: Value = int(raw.strip())
        except ValueError:
            raise ValueTagError(INTEGER, raw, where) from None
        return check_tag(value, INTEGER, where)
    return raw


class CSVLoader:
    """Read and write one CSV file per relation."""

    @classmethod
    def read_relation(cls, rel: RelationSchema, stream: BinaryIO) -> dict[int, tuple[Value, ...]]:
        """
        Read one relation's rows.

        The header must name every attribute exactly once, optionally preceded
        by an ``_id`` column. Without ``_id``, ids run from 0 in row order.
        """
        text = io.TextIOWrapper(stream, encoding="utf-8", newline="")
        reader = csv.reader(text)
        try:
            header = next(reader)
        except StopIteration:
            return {}
        except csv.Error as e:
            raise CSVFormatError(rel.name, 1, str(e)) from e

        has_ids = bool(header) and header[0] == ID_COLUMN
        columns = header[1:] if has_ids else header
        if sorted(columns) != sorted(rel.attribute_names) or len(set(columns)) != len(columns):
            raise CSVFormatError(
                rel.name, 1, f"header {header} does not match attributes {list(rel.attribute_names)}"
            )
        order = [columns.index(name) for name in rel.attribute_names]
        width = len(header)

        rows: dict[int, tuple[Value, ...]] = {}
        try:
            for row_no, record in enumerate(reader, start=2):
                if not record:
                    continue
                if len(record) != width:
                    raise CSVFormatError(rel.name, row_no, f"expected {width} fields, got {len(record)}")
                if has_ids:
                    raw_id, fields = record[0].strip(), record[1:]
                    if not re.fullmatch(r"[0-9]+", raw_id):
                        raise CSVFormatError(rel.name, row_no, f"tuple id {raw_id!r} is not an unsigned integer")
                    tuple_id = int(raw_id)
                else:
                    tuple_id, fields = len(rows), record
                if tuple_id in rows:
                    raise DuplicateTupleIdError(rel.name, tuple_id)
                rows[tuple_id] = tuple(_convert(fields[j], rel, i, row_no) for i, j in enumerate(order))
        except csv.Error as e:
            raise CSVFormatError(rel.name, reader.line_num, str(e)) from e
        finally:
            text.detach()
        return rows

    @classmethod
    def load(cls, schema: Schema, sources: Mapping[str, BinaryIO]) -> Instance:
        """Build an instance from byte streams keyed by relation name."""
        rows = {name: cls.read_relation(schema.relation(name), stream) for name, stream in sources.items()}
        return Instance(schema, rows)

    @classmethod
    def load_directory(cls, schema_path: Path | str, data_dir: Optional[Path | str]) -> Instance:
        """
        Load ``<Relation>.csv`` files next to a schema file.

        A relation without a file is empty.
        """
        return cls.load_dir(load_schema(schema_path), data_dir)

    @classmethod
    def load_dir(cls, schema: Schema, data_dir: Optional[Path | str]) -> Instance:
        """Load ``<Relation>.csv`` files from data_dir for an already parsed schema."""
        if data_dir is None:
            return Instance.empty(schema)
        data_dir = Path(data_dir)
        sources: dict[str, BinaryIO] = {}
        try:
            for rel in schema.relations:
                path = data_dir / f"{rel.name}.csv"
                if path.exists():
                    sources[rel.name] = open(path, "rb")
            return cls.load(schema, sources)
        finally:
            for stream in sources.values():
                stream.close()

    @classmethod
    def dump(cls, instance: Instance, relation: str) -> bytes:
        """Normalized CSV: ``_id`` first, rows in id order, CRLF line ends."""
        rel = instance.schema.relation(relation)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow([ID_COLUMN, *rel.attribute_names])
        for ref, values in instance.tuples(relation):
            writer.writerow([ref.tuple_id, *values])
        return buffer.getvalue().encode("utf-8")

    @classmethod
    def write_directory(cls, instance: Instance, out_dir: Path | str) -> list[Path]:
        """Write every relation as ``<Relation>.csv`` under out_dir."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for name in instance.schema.names:
            path = out_dir / f"{name}.csv"
            path.write_bytes(cls.dump(instance, name))
            written.append(path)
        return written


def load_csv(schema_decl: Union[str, Schema], csv_sources: Mapping[str, BinaryIO]) -> Instance:
    """
    Build an Instance from a schema declaration and CSV byte streams.

    Args:
        schema_decl: Declaration text or an already parsed Schema.
        csv_sources: Byte stream per relation name.

    Raises:
        SchemaParseError: If the declaration does not parse.
        CSVFormatError: On a malformed header or row.
        ValueTagError: On non-numeric text in an integer column.
        DuplicateTupleIdError: On a repeated ``_id``.
    """
    schema = parse_schema(schema_decl) if isinstance(schema_decl, str) else schema_decl
    return CSVLoader.load(schema, csv_sources)


def dump_csv(instance: Instance, relation: str) -> bytes:
    return CSVLoader.dump(instance, relation)
