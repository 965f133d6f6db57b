"""``bimlog`` command line: replay, diff, synth and validate.

Exit status: 0 success, 1 finished with diagnostics, 2 bad input (unreadable
file, malformed log in strict mode, schema mismatch, infeasible request),
3 internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from enum import IntEnum
from pathlib import Path

from .codec import LogFormatError, LogReadError, dumps_log, read_log
from .diff import MATCH_COMMENT, MATCH_ID, diff_models
from .errors import BimLogError, ScenarioError, SchemaError
from .model import ModelState
from .replay import LENIENT, STRICT, ReplayError, replay_log
from .sim import DEFAULT_FIRST_ID, dumps_scenario, loads_scenario, random_scenario, run_scenario
from .units import unit_roundtrip_events


class ExitStatus(IntEnum):
    OK = 0
    DIAGNOSTICS = 1
    INPUT_ERROR = 2
    INTERNAL_ERROR = 3


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _read_text(path: str | Path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_replay(log: str, output: str, mode: str = LENIENT, unit_roundtrip: bool = False, as_json: bool = False) -> ExitStatus:
    try:
        events, diags = read_log(log, strict=mode == STRICT)
    except LogReadError as exc:
        _err(f"error: {exc}")
        return ExitStatus.INPUT_ERROR
    except LogFormatError as exc:
        _err(f"error: {exc.diagnostic()}")
        return ExitStatus.INPUT_ERROR
    if unit_roundtrip:
        events = unit_roundtrip_events(events)
    try:
        model, report = replay_log(events, mode)
    except ReplayError as exc:
        _err(f"error: {exc.diagnostic}")
        return ExitStatus.INPUT_ERROR
    try:
        _write_text(output, model.dumps())
    except OSError as exc:
        _err(f"error: cannot write model: {exc}")
        return ExitStatus.INPUT_ERROR
    diags = diags + report.warnings
    for d in diags:
        _err(str(d))
    if as_json:
        doc = report.to_json()
        doc["diagnostics"] = [d.to_json() for d in diags]
        print(json.dumps(doc, indent=2))
    else:
        print(report.summary())
    return ExitStatus.DIAGNOSTICS if diags else ExitStatus.OK


def _load_model(path: str) -> ModelState:
    try:
        text = _read_text(path)
    except (OSError, UnicodeDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    return ModelState.loads(text)


def cmd_diff(original: str, reproduced: str, as_json: bool = False, method: str = MATCH_COMMENT) -> ExitStatus:
    try:
        a, b = _load_model(original), _load_model(reproduced)
    except SchemaError as exc:
        _err(f"error: {exc}")
        return ExitStatus.INPUT_ERROR
    report = diff_models(a, b, method)
    print(json.dumps(report.to_json(), indent=2) if as_json else report.to_table())
    return ExitStatus.OK


def parse_counts(text: str) -> list[int]:
    try:
        counts = [int(p) for p in text.split(",")]
    except ValueError:
        raise ScenarioError(f"counts must be five comma-separated integers, got {text!r}") from None
    return counts


def cmd_synth(
    seed: int,
    counts: str,
    churn: float,
    output: str,
    truth: str | None = None,
    scenario: str | None = None,
    write_scenario: str | None = None,
) -> ExitStatus:
    try:
        if scenario is not None:
            steps = loads_scenario(_read_text(scenario))
        else:
            steps = random_scenario(seed, parse_counts(counts), churn)
        events, model = run_scenario(steps, DEFAULT_FIRST_ID)
    except ScenarioError as exc:
        _err(f"error: {exc}")
        return ExitStatus.INPUT_ERROR
    except OSError as exc:
        _err(f"error: cannot read scenario: {exc}")
        return ExitStatus.INPUT_ERROR
    out = Path(output)
    truth_path = Path(truth) if truth else out.with_name(out.stem + ".truth.json")
    try:
        _write_text(out, dumps_log(events))
        _write_text(truth_path, model.dumps())
        if write_scenario:
            _write_text(write_scenario, dumps_scenario(steps))
    except OSError as exc:
        _err(f"error: cannot write output: {exc}")
        return ExitStatus.INPUT_ERROR
    print(f"wrote {len(events)} events to {out} and ground truth to {truth_path}")
    return ExitStatus.OK


def cmd_validate(log: str) -> ExitStatus:
    try:
        events, diags = read_log(log)
    except LogReadError as exc:
        _err(f"error: {exc}")
        return ExitStatus.INPUT_ERROR
    _, report = replay_log(events, LENIENT)
    diags = sorted(diags + report.warnings, key=lambda d: (d.seq or 0, d.row or 0))
    for d in diags:
        print(d)
    print(f"{len(events) + sum(d.code == 'format' for d in diags)} rows checked, {len(diags)} diagnostics")
    return ExitStatus.DIAGNOSTICS if diags else ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bimlog", description="Replay, compare and synthesize enhanced BIM logs.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("replay", help="rebuild a model from a log")
    r.add_argument("log")
    r.add_argument("-o", "--output", required=True, help="model dump to write")
    mode = r.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="mode", action="store_const", const=STRICT)
    mode.add_argument("--lenient", dest="mode", action="store_const", const=LENIENT)
    r.set_defaults(mode=LENIENT)
    r.add_argument("--unit-roundtrip", action="store_true", help="send the log through feet and back before replay")
    r.add_argument("--json", action="store_true", help="print the replay report as JSON")

    d = sub.add_parser("diff", help="compare two model dumps")
    d.add_argument("original")
    d.add_argument("reproduced")
    d.add_argument("--json", action="store_true")
    d.add_argument("--match", choices=(MATCH_COMMENT, MATCH_ID), default=MATCH_COMMENT)

    s = sub.add_parser("synth", help="simulate an authoring session")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--counts", default="97,8,8,19,27", help="net walls,floors,windows,doors,columns")
    s.add_argument("--churn", type=float, default=0.0)
    s.add_argument("-o", "--output", required=True, help="log to write")
    s.add_argument("--truth", help="ground-truth model dump (default: <log stem>.truth.json)")
    s.add_argument("--scenario", help="run this scenario JSON instead of a random one")
    s.add_argument("--write-scenario", help="also save the scenario as JSON")

    v = sub.add_parser("validate", help="check a log without writing anything")
    v.add_argument("log")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            status = cmd_replay(args.log, args.output, args.mode, args.unit_roundtrip, args.json)
        elif args.command == "diff":
            status = cmd_diff(args.original, args.reproduced, args.json, args.match)
        elif args.command == "synth":
            status = cmd_synth(
                args.seed, args.counts, args.churn, args.output, args.truth, args.scenario, args.write_scenario
            )
        else:
            status = cmd_validate(args.log)
    except BimLogError as exc:
        _err(f"internal error: {exc}")
        return ExitStatus.INTERNAL_ERROR
    except Exception as exc:  # noqa: BLE001
        _err(f"internal error: {type(exc).__name__}: {exc}")
        return ExitStatus.INTERNAL_ERROR
    return int(status)


if __name__ == "__main__":
    sys.exit(main())
