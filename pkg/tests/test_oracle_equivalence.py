"""Closure-based MRIs against exhaustive search on seeded random instances."""

from __future__ import annotations

import random

import pytest

from mdresolve.engine.resolve import chase, compute_mris, is_stable, level_sum, oracle_mris, verify_mri
from mdresolve.engine.sampling import SHARED_DOMAIN, TEMPLATES, random_instance

CASES = 70
DEPTH = 6


def _cases(template: str, seed: int):
    rng = random.Random(seed)
    for _ in range(CASES):
        mds = TEMPLATES[template](rng)
        if template == "cross-simple-cycle":
            yield random_instance(mds.schema, rng, 3, domain=SHARED_DOMAIN), mds
            continue
        per_relation = 3 if template == "hsc" else rng.randint(3, 5)
        yield random_instance(mds.schema, rng, per_relation, rng.randint(2, 3)), mds


@pytest.mark.parametrize(
    "template, seed",
    [("non-interacting", 101), ("simple-cycle", 202), ("hsc", 303), ("cross-simple-cycle", 404)],
)
def test_closure_mris_equal_oracle_mris(template, seed):
    for d, mds in _cases(template, seed):
        closure = compute_mris(d, mds, depth=DEPTH)
        oracle = oracle_mris(d, mds, depth=DEPTH)
        if closure.unstable_dropped:
            assert closure.method == "oracle"
        else:
            assert not closure.truncated
        assert closure.count > 0
        assert closure.keys() == oracle.keys(), f"{mds}\n{d.to_dict()}"
        assert closure.min_changes == oracle.min_changes


@pytest.mark.parametrize(
    "template, seed",
    [("non-interacting", 11), ("simple-cycle", 22), ("hsc", 33), ("cross-simple-cycle", 44)],
)
def test_chase_terminates_with_increasing_level_sum(template, seed):
    for d, mds in _cases(template, seed):
        states = chase(d, mds)
        assert is_stable(states[-1], mds)
        sums = [level_sum(s, mds) for s in states]
        assert all(a < b for a, b in zip(sums, sums[1:]))


@pytest.mark.parametrize("template, seed", [("simple-cycle", 44), ("hsc", 55)])
def test_every_mri_verifies(template, seed):
    for d, mds in _cases(template, seed):
        result = compute_mris(d, mds, depth=DEPTH)
        if result.method == "oracle":
            continue
        for m in result.mris:
            assert verify_mri(d, m, mds)
