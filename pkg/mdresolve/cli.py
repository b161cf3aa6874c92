"""Command-line interface for mdresolve."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .config import FORMATS, RunConfig
from .engine.answers import STRATEGIES
from .engine.cqa import reduction_report
from .engine.instance import Instance, Schema, diff
from .engine.mdspec import SUPPORTED_CLASSES
from .engine.resolve import compute_mris, level_sum, oracle_mris
from .engine.sampling import TEMPLATES, random_instance, random_query
from .exceptions import ConfigError, MDResolveError
from .io.csv_loader import CSVLoader
from .io.json_export import answers_to_json, changes_to_json, dumps, instance_to_json, result_to_json
from .io.repository import FixtureRepository
from .log import configure_logging
from .resolver import CLOSURE_KINDS, Resolver


class _UsageError(Exception):
    """argparse rejected the command line."""

    def __init__(self, code: int):
        self.code = code


class _Parser(argparse.ArgumentParser):
    def exit(self, status: int = 0, message: Optional[str] = None):
        if message:
            self._print_message(message, sys.stderr)
        raise _UsageError(status)


def _emit(payload: Any) -> None:
    print(dumps(payload))


def _config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the YAML file, then explicit flags."""
    base = RunConfig.from_file(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {
        name: getattr(args, name, None)
        for name in (
            "schema", "data", "mds", "query", "strategy", "limit", "depth",
            "max_steps", "seed", "trials", "out", "format", "fixture",
        )
    }
    return base.merged(**overrides)


def _resolver(config: RunConfig) -> Resolver:
    return Resolver.from_config(config)


def _query(resolver: Resolver, config: RunConfig):
    if config.query is not None:
        name = str(config.query)
        if name not in resolver.queries and not config.query.exists():
            raise ConfigError("query", f"no such file or fixture query: {name}")
        return resolver.query(name)
    if len(resolver.queries) == 1:
        return next(iter(resolver.queries.values()))
    raise ConfigError("query", "required for this command")


def _write_instance(instance: Instance, out_dir: Path) -> None:
    CSVLoader.write_directory(instance, out_dir)


def cmd_classify(args: argparse.Namespace) -> int:
    """Print the MD class."""
    resolver = _resolver(_config(args))
    _emit({"class": str(resolver.classify())})
    return 0


def cmd_closure(args: argparse.Namespace) -> int:
    """Print closure classes."""
    resolver = _resolver(_config(args))
    partition = resolver.closure(args.kind, args.md)
    _emit({"kind": args.kind, **partition.to_json()})
    return 0


def cmd_resolve(args: argparse.Namespace) -> int:
    """Chase to a stable instance."""
    config = _config(args)
    resolver = _resolver(config)
    states = resolver.chase(config.max_steps)
    final = states[-1]

    # CSV goes to a directory; JSON goes to stdout
    if config.format == "csv":
        config.require("out")
        _write_instance(final, config.out)
        if args.trace:
            for step, state in enumerate(states):
                _write_instance(state, config.out / "trace" / f"step_{step:03d}")
        print(f"Wrote: {config.out}", file=sys.stderr)
        return 0

    payload: dict[str, Any] = {
        "steps": len(states) - 1,
        "changes": changes_to_json(diff(resolver.instance, final)),
        "level_sum": level_sum(final, resolver.mds),
        "instance": instance_to_json(final),
    }
    if args.trace:
        payload["trace"] = [
            {"step": i, "level_sum": level_sum(s, resolver.mds), "instance": instance_to_json(s)}
            for i, s in enumerate(states)
        ]
    _emit(payload)
    return 0


def cmd_mris(args: argparse.Namespace) -> int:
    """Enumerate minimally resolved instances."""
    config = _config(args)
    resolver = _resolver(config)
    result = resolver.mris(config.limit, config.depth)
    payload = {"class": str(resolver.classify()), **result_to_json(result, include_instances=config.out is None)}

    # One directory per MRI, plus the summary
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
        for k, (mri, changes) in enumerate(zip(result.mris, result.changes)):
            target = config.out / f"mri_{k:03d}"
            _write_instance(mri, target)
            (target / "changes.json").write_text(dumps(changes_to_json(changes)) + "\n", encoding="utf-8")
        (config.out / "summary.json").write_text(dumps(payload) + "\n", encoding="utf-8")
    _emit(payload)
    return 0


def cmd_answer(args: argparse.Namespace) -> int:
    """Compute resolved answers."""
    config = _config(args)
    resolver = _resolver(config)
    q = _query(resolver, config)
    answers = resolver.answer(q, config.strategy, limit=config.limit, depth=config.depth)
    _emit({"query": str(q), "strategy": config.strategy, "answers": answers_to_json(answers)})
    return 0


def cmd_rewrite(args: argparse.Namespace) -> int:
    """Rewrite a ucajCQ."""
    config = _config(args)
    resolver = _resolver(config)
    rq = resolver.rewrite(_query(resolver, config))
    if args.emit_text:
        print(rq.to_text())
    else:
        _emit(rq.to_dict())
    return 0


def cmd_oracle_check(args: argparse.Namespace) -> int:
    """Compare the closure-based MRIs with exhaustive search."""
    config = _config(args)
    resolver = _resolver(config)
    oracle = oracle_mris(resolver.instance, resolver.mds, config.depth)
    minimal = oracle.keys()
    payload: dict[str, Any] = {
        "class": str(resolver.classify()),
        "oracle": result_to_json(oracle, include_instances=False),
        "resolved": [
            {
                "instance": instance_to_json(e),
                "changes": len(diff(resolver.instance, e)),
                "minimal": e.key() in minimal,
            }
            for e in oracle.resolved
        ],
    }
    # Only supported classes have a closure form to compare
    if resolver.classify() in SUPPORTED_CLASSES:
        closure = compute_mris(resolver.instance, resolver.mds, config.limit, depth=config.depth)
        payload["closure"] = result_to_json(closure, include_instances=False)
        payload["agree"] = closure.keys() == minimal
    else:
        payload["closure"] = None
        payload["agree"] = None
    _emit(payload)
    return 0 if payload["agree"] is not False else 1


def _trial_inputs(resolver: Optional[Resolver], config: RunConfig, rng: random.Random):
    """Instance, MD set and query for one reduction trial."""
    if resolver is None:
        mds = TEMPLATES["key-shape"](rng)
        q = random_query(mds, rng)
    else:
        mds = resolver.mds
        q = _query(resolver, config) if (config.query or resolver.queries) else random_query(mds, rng)
    schema: Schema = mds.schema
    n_tuples = rng.randint(1, max(1, 6 // len(schema.relations)))
    return random_instance(schema, rng, n_tuples), mds, q


def cmd_cqa_check(args: argparse.Namespace) -> int:
    """Check the reduction to consistent query answering on random instances."""
    config = _config(args)
    resolver = _resolver(config) if (config.fixture or config.mds) else None
    if resolver is not None and len(resolver.mds) != 1:
        raise ConfigError("mds", "the reduction takes exactly one MD")

    # Random key-shape inputs unless a fixture or MD file is given
    rng = random.Random(config.seed)
    trials = []
    for trial in range(config.trials):
        d, mds, q = _trial_inputs(resolver, config, rng)
        report = reduction_report(d, mds[0], q, limit=config.limit, depth=config.depth)
        trials.append({"trial": trial, "query": str(q), "tuples": len(d), **report.to_dict()})

    passed = sum(1 for t in trials if t["holds"])
    _emit({"seed": config.seed, "passed": passed, "failed": len(trials) - passed, "trials": trials})
    return 0 if passed == len(trials) else 1


def cmd_check_fan(args: argparse.Namespace) -> int:
    """Evaluate the similarity-preserving pair semantics against another instance."""
    config = _config(args)
    other_dir = Path(args.other)
    if not other_dir.is_dir():
        raise ConfigError("other", f"not a directory: {other_dir}")
    resolver = _resolver(config)
    other = resolver.load_other(other_dir)
    _emit({
        "fan": resolver.check_fan(other).to_dict(),
        "pair": resolver.check(other).to_dict(),
    })
    return 0


def cmd_fixtures(args: argparse.Namespace) -> int:
    """List bundled fixtures."""
    fixtures = FixtureRepository.available()
    if not fixtures:
        print("No fixtures available.", file=sys.stderr)
        return 1
    if args.json:
        _emit(fixtures)
    else:
        print(f"Available fixtures: {len(fixtures)}")
        print()
        for name, info in sorted(fixtures.items()):
            print(f"  {name}: {info.get('description', '')}")
    return 0


def _inputs_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--schema", metavar="FILE", help="Schema declaration file")
    parent.add_argument("--data", "--in", dest="data", metavar="DIR", help="Directory of <Relation>.csv files")
    parent.add_argument("--mds", metavar="FILE", help="Matching dependency file")
    parent.add_argument("--fixture", metavar="NAME", help="Use a bundled fixture (see 'fixtures')")
    parent.add_argument("--config", metavar="FILE", help="YAML run config (requires PyYAML)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mdresolve",
        description="Entity resolution under matching dependencies",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    inputs = _inputs_parent()

    classify_parser = subparsers.add_parser("classify", parents=[inputs], help="Classify the MD set")
    classify_parser.set_defaults(func=cmd_classify)

    closure_parser = subparsers.add_parser("closure", parents=[inputs], help="Dump closure classes")
    closure_parser.add_argument("--kind", choices=CLOSURE_KINDS, default="tuple-attribute", help="Closure to compute")
    closure_parser.add_argument("--md", type=int, default=None, help="MD index for the tuple closure")
    closure_parser.set_defaults(func=cmd_closure)

    resolve_parser = subparsers.add_parser("resolve", parents=[inputs], help="Chase to a resolved instance")
    resolve_parser.add_argument("--max-steps", dest="max_steps", type=int, help="Chase step limit")
    resolve_parser.add_argument("--trace", action="store_true", help="Include every chase step")
    resolve_parser.add_argument("--format", choices=FORMATS, help="Output format")
    resolve_parser.add_argument("--out", metavar="DIR", help="Output directory (CSV format)")
    resolve_parser.set_defaults(func=cmd_resolve)

    mris_parser = subparsers.add_parser("mris", parents=[inputs], help="Enumerate minimally resolved instances")
    mris_parser.add_argument("--limit", type=int, help="Maximum number of MRIs")
    mris_parser.add_argument("--depth", type=int, help="Oracle depth for classes without a closure form")
    mris_parser.add_argument("--out", metavar="DIR", help="Write each MRI as CSVs plus changes.json")
    mris_parser.set_defaults(func=cmd_mris)

    answer_parser = subparsers.add_parser("answer", parents=[inputs], help="Resolved answers to a query")
    answer_parser.add_argument("--query", metavar="FILE", help="Query file (.cq) or fixture query name")
    answer_parser.add_argument("--strategy", choices=STRATEGIES, help="Answering strategy")
    answer_parser.add_argument("--limit", type=int, help="MRI enumeration limit")
    answer_parser.add_argument("--depth", type=int, help="Oracle depth")
    answer_parser.set_defaults(func=cmd_answer)

    rewrite_parser = subparsers.add_parser("rewrite", parents=[inputs], help="Rewrite a ucajCQ")
    rewrite_parser.add_argument("--query", metavar="FILE", help="Query file (.cq) or fixture query name")
    rewrite_parser.add_argument("--emit-text", dest="emit_text", action="store_true", help="Print the formula")
    rewrite_parser.set_defaults(func=cmd_rewrite)

    oracle_parser = subparsers.add_parser("oracle-check", parents=[inputs], help="Compare MRIs with exhaustive search")
    oracle_parser.add_argument("--depth", type=int, help="Search depth")
    oracle_parser.add_argument("--limit", type=int, help="MRI enumeration limit")
    oracle_parser.set_defaults(func=cmd_oracle_check)

    cqa_parser = subparsers.add_parser("cqa-check", parents=[inputs], help="Check the reduction to consistent answers")
    cqa_parser.add_argument("--query", metavar="FILE", help="Query file (.cq); random ucajCQs otherwise")
    cqa_parser.add_argument("--trials", type=int, help="Number of random instances")
    cqa_parser.add_argument("--seed", type=int, help="Random seed")
    cqa_parser.add_argument("--limit", type=int, help="Enumeration limit")
    cqa_parser.set_defaults(func=cmd_cqa_check)

    fan_parser = subparsers.add_parser(
        "check-fan-semantics", parents=[inputs], help="Check a pair under the similarity-preserving semantics"
    )
    fan_parser.add_argument("--other", metavar="DIR", required=True, help="Directory of the second instance")
    fan_parser.set_defaults(func=cmd_check_fan)

    fixtures_parser = subparsers.add_parser("fixtures", help="List bundled fixtures")
    fixtures_parser.add_argument("--json", action="store_true", help="Output as JSON")
    fixtures_parser.set_defaults(func=cmd_fixtures)

    return parser


def _error(e: BaseException) -> None:
    print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point for the CLI."""
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        return e.code

    try:
        return args.func(args)
    except (ConfigError, ImportError) as e:
        _error(e)
        return 2
    except MDResolveError as e:
        _error(e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
