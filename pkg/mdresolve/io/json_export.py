"""JSON payloads for instances, changes and results."""

from __future__ import annotations

import json
from typing import Any, Iterable

from ..engine.instance import ChangeSet, Instance, Value
from ..engine.resolve import ResolutionResult


def dumps(payload: Any) -> str:
    """Deterministic JSON text: keys in insertion order, non-ASCII kept."""
    return json.dumps(payload, indent=2, ensure_ascii=False)


def instance_to_json(instance: Instance) -> dict[str, Any]:
    return instance.to_dict()


def changes_to_json(changes: ChangeSet) -> list[list[Any]]:
    """Changed positions as ``[relation, tuple_id, attribute]`` triples, sorted."""
    return changes.to_list()


def answers_to_json(answers: Iterable[tuple[Value, ...]]) -> list[list[Value]]:
    """Answer tuples sorted by value; text and integers never share a column."""
    return [list(a) for a in sorted(answers, key=lambda row: tuple((isinstance(v, str), v) for v in row))]


def result_to_json(result: ResolutionResult, *, include_instances: bool = True) -> dict[str, Any]:
    """
    Summary of an MRI computation.

    Args:
        result: Closure- or oracle-based result.
        include_instances: Also embed every MRI with its change set.
    """
    payload: dict[str, Any] = {
        "count": result.count,
        "min_changes": result.min_changes,
        "method": result.method,
        "truncated": result.truncated,
    }
    if result.method == "oracle":
        payload["resolved"] = len(result.resolved)
        payload["active_domain_relative"] = result.active_domain_relative
    if result.unstable_dropped:
        payload["unstable_dropped"] = result.unstable_dropped
    if include_instances:
        payload["mris"] = [
            {"instance": instance_to_json(m), "changes": changes_to_json(c)}
            for m, c in zip(result.mris, result.changes)
        ]
    return payload
