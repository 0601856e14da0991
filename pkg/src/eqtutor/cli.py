"""Command line front end.

Exit codes: 0 on success, 1 when the request is understood but cannot
be served (unsuitable equation, no derivation, failed self-check), 2
for malformed input (bad flags, unparseable terms, bad XML).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import exercises as ex_mod
from . import xmlio
from .config import Configuration
from .exercises import (
    ExerciseError,
    allfirsts,
    applicable,
    derivation,
    diagnose,
    exercise,
    findbuggyrules,
    generate,
)
from .strategy import StrategyError, present, term_lines
from .syntax import ParseError, parse, to_text


def _load_configuration(path: str | None) -> Configuration:
    if path is None:
        return ()
    return xmlio.parse_configuration(Path(path).read_text(encoding="utf-8"))


def _path_list(path: tuple[int, ...]) -> list[int]:
    return list(path)


def _emit(args, text_lines: list[str], payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_solve(args) -> int:
    ex = exercise(args.exercise)
    term = parse(args.term)
    config = _load_configuration(args.config)
    d = derivation(ex, term, config)
    lines = [to_text(t) for t in term_lines(d)]
    steps = [
        {
            "name": s.name,
            "before": to_text(s.before),
            "after": to_text(s.after),
            "scratch": [to_text(t) for t in s.scratch],
            "collapsed": s.collapsed_label,
        }
        for s in present(d)
    ]
    _emit(args, lines, {"lines": lines, "steps": steps, "final": to_text(d.final)})
    return 0


def cmd_firsts(args) -> int:
    ex = exercise(args.exercise)
    term = parse(args.term)
    config = _load_configuration(args.config)
    got = allfirsts(ex, term, config)
    if args.limit is not None:
        got = got[: args.limit]
    lines = [f"{name} at {list(path)}: {to_text(after)}" for name, path, after in got]
    payload = [
        {"rule": name, "path": _path_list(path), "term": to_text(after)}
        for name, path, after in got
    ]
    _emit(args, lines, payload)
    return 0


def cmd_applicable(args) -> int:
    ex = exercise(args.exercise)
    term = parse(args.term)
    config = _load_configuration(args.config)
    got = applicable(ex, term, config)
    if args.limit is not None:
        got = got[: args.limit]
    lines = [f"{name} at {list(path)}" for name, path in got]
    payload = [{"rule": name, "path": _path_list(path)} for name, path in got]
    _emit(args, lines, payload)
    return 0


def cmd_diagnose(args) -> int:
    ex = exercise(args.exercise)
    before = parse(args.term)
    after = parse(args.proposed)
    config = _load_configuration(args.config)
    result = diagnose(ex, before, after, config)
    payload = {"kind": result.kind}
    if result.detail is not None:
        payload["detail"] = result.detail
    _emit(args, [str(result)], payload)
    return 0


def cmd_buggy(args) -> int:
    ex = exercise(args.exercise)
    before = parse(args.term)
    after = parse(args.proposed)
    got = findbuggyrules(ex, before, after)
    _emit(args, got, got)
    return 0


def cmd_configure(args) -> int:
    source = Path(args.strategy)
    catalog = dict(ex_mod._INTERP.strategies)
    expansions = dict(ex_mod.EXPANSIONS)
    if source.exists():
        strategy = xmlio.parse_configured_strategy(
            source.read_text(encoding="utf-8"), catalog, expansions
        )
    elif args.strategy in ex_mod.EXERCISES:
        strategy = exercise(args.strategy).strategy
    elif args.strategy in catalog:
        strategy = catalog[args.strategy]
    else:
        raise ExerciseError(f"unknown strategy: {args.strategy}")
    if args.config is not None:
        from .config import apply_configuration

        strategy = apply_configuration(
            strategy, _load_configuration(args.config), expansions
        )
    sys.stdout.write(xmlio.serialize_strategy(strategy))
    return 0


def cmd_roundtrip(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    sys.stdout.write(xmlio.serialize_strategy(xmlio.parse_strategy(text)))
    return 0


def cmd_generate(args) -> int:
    ex = exercise(args.exercise)
    rng = random.Random(args.seed)
    count = args.limit if args.limit is not None else 1
    lines = [to_text(generate(ex, rng)) for _ in range(count)]
    _emit(args, lines, lines)
    return 0


def cmd_check(args) -> int:
    from . import selfcheck

    results = selfcheck.run_all(seed=args.seed or 0)
    failed = False
    for name, ok, detail in results:
        mark = "ok" if ok else "FAIL"
        suffix = f": {detail}" if detail else ""
        print(f"{mark:4s} {name}{suffix}")
        failed = failed or not ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqtutor", description="stepwise equation solving services"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", help="configuration XML file")
        p.add_argument(
            "--format", choices=("text", "json"), default="text",
            help="output format",
        )
        p.add_argument("--limit", type=int, help="truncate list output")
        p.add_argument("--seed", type=int, help="random seed")

    p = sub.add_parser("solve", help="print a worked solution")
    p.add_argument("exercise", choices=sorted(ex_mod.EXERCISES))
    p.add_argument("term")
    common(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("firsts", help="possible next steps")
    p.add_argument("exercise", choices=sorted(ex_mod.EXERCISES))
    p.add_argument("term")
    common(p)
    p.set_defaults(fn=cmd_firsts)

    p = sub.add_parser("applicable", help="rule applications, strategy aside")
    p.add_argument("exercise", choices=sorted(ex_mod.EXERCISES))
    p.add_argument("term")
    common(p)
    p.set_defaults(fn=cmd_applicable)

    p = sub.add_parser("diagnose", help="classify a hand-entered step")
    p.add_argument("exercise", choices=sorted(ex_mod.EXERCISES))
    p.add_argument("term")
    p.add_argument("proposed")
    common(p)
    p.set_defaults(fn=cmd_diagnose)

    p = sub.add_parser("buggy", help="buggy rules explaining a step")
    p.add_argument("exercise", choices=sorted(ex_mod.EXERCISES))
    p.add_argument("term")
    p.add_argument("proposed")
    common(p, config=False)
    p.set_defaults(fn=cmd_buggy)

    p = sub.add_parser(
        "configure", help="apply a configuration and print the strategy"
    )
    p.add_argument("strategy", help="exercise id, strategy name, or XML file")
    common(p)
    p.set_defaults(fn=cmd_configure)

    p = sub.add_parser("roundtrip", help="parse a strategy file, print it back")
    p.add_argument("file")
    common(p, config=False)
    p.set_defaults(fn=cmd_roundtrip)

    p = sub.add_parser("generate", help="generate practice equations")
    p.add_argument("exercise", choices=sorted(ex_mod.EXERCISES))
    common(p, config=False)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("check", help="run the built-in invariant checks")
    common(p, config=False)
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except xmlio.XmlError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ExerciseError, StrategyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
