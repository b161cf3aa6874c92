"""
mdresolve - entity resolution under matching dependencies

Resolves relational instances under matching dependencies (MDs): checks
pairs of instances against an MD set, chases to resolved instances,
computes minimally resolved instances (MRIs) and answers conjunctive
queries over all MRIs.

Example usage:
    >>> from mdresolve import Resolver
    >>>
    >>> r = Resolver.from_fixture("two_mri")
    >>> r.mris().count
    2
    >>> r.answer(r.queries["q2"])
    {('a1',)}
"""

from .resolver import Resolver
from .config import RunConfig
from .exceptions import (
    MDResolveError,
    MDParseError,
    NoStrategyError,
    NotUcajError,
    UnsupportedMDClassError,
)

__version__ = "0.1.0"

__all__ = [
    "Resolver",
    "RunConfig",
    "MDResolveError",
    "MDParseError",
    "NoStrategyError",
    "NotUcajError",
    "UnsupportedMDClassError",
    "__version__",
]
