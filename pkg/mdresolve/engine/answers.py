"""Resolved (certain) answers by MRI enumeration or by rewriting."""

from __future__ import annotations

import logging
from typing import Optional

from ..exceptions import (
    EnumerationTruncatedError,
    MDResolveError,
    NoStrategyError,
    OracleGuardError,
)
from .instance import Instance, Value
from .mdspec import SUPPORTED_CLASSES, MDSet
from .query import ConjunctiveQuery, evaluate_query
from .resolve import DEFAULT_DEPTH, DEFAULT_LIMIT, ResolutionResult, compute_mris, oracle_mris
from .rewrite import eval_rewritten, rewrite

logger = logging.getLogger(__name__)

ENUMERATE = "enumerate"
REWRITE = "rewrite"
AUTO = "auto"
STRATEGIES = (AUTO, ENUMERATE, REWRITE)


def answers_over(q: ConjunctiveQuery, instances: list[Instance]) -> set[tuple[Value, ...]]:
    """Answers of q common to every instance."""
    common: Optional[set[tuple[Value, ...]]] = None
    for inst in instances:
        found = evaluate_query(q, inst)
        common = found if common is None else common & found
        if not common:
            break
    return common or set()


def minimal_instances(
    d: Instance, mds: MDSet, limit: int = DEFAULT_LIMIT, depth: int = DEFAULT_DEPTH
) -> ResolutionResult:
    """MRIs by closure when the class allows it, else by the bounded oracle."""
    if mds.md_class in SUPPORTED_CLASSES:
        return compute_mris(d, mds, limit, depth=depth)
    return oracle_mris(d, mds, depth)


def resolved_answers(
    q: ConjunctiveQuery,
    d: Instance,
    mds: MDSet,
    strategy: str = AUTO,
    *,
    limit: int = DEFAULT_LIMIT,
    depth: int = DEFAULT_DEPTH,
) -> set[tuple[Value, ...]]:
    """
    Answers of q that hold in every MRI of d.

    Args:
        q: The query.
        d: The instance.
        mds: The MD set.
        strategy: "enumerate", "rewrite", or "auto" (rewrite when legal).
        limit: MRI enumeration limit.
        depth: Oracle depth for classes without a closure form.

    Raises:
        NoStrategyError: If the requested strategy (or every strategy, for auto) is illegal.
        EnumerationTruncatedError: If enumeration hit the limit.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown strategy: {strategy!r}")

    reasons: list[str] = []
    if strategy in (AUTO, REWRITE):
        try:
            rq = rewrite(q, mds, d.schema)
        except MDResolveError as e:
            reasons.append(f"rewrite: {e}")
        else:
            logger.info("answering %s by rewriting", q.name)
            return eval_rewritten(rq, d, mds)
        if strategy == REWRITE:
            raise NoStrategyError(reasons)

    try:
        result = minimal_instances(d, mds, limit, depth)
    except OracleGuardError as e:
        reasons.append(f"enumerate: {e}")
        raise NoStrategyError(reasons) from e
    if result.truncated:
        raise EnumerationTruncatedError(limit)
    logger.info("answering %s over %d MRI(s)", q.name, result.count)
    return answers_over(q, result.mris)
