"""Line-delimited scenario execution.

A scenario is UTF-8 text with one JSON object per line. Protocol calls look
like {"as": <seed-or-address>, "op": <name>, "args": {...}}; meta commands
drive the environment itself:

    {"op": "create_account", "seed": "alice"}
    {"op": "advance_time", "delta": 86400}
    {"op": "assert_event", "match": {"name": "Accepted", "attributes": {...}}}
    {"op": "assert_state", "path": "token/balances/@alice", "equals": "100"}

Protocol rejections become Error events in the log, not run failures, so
adversarial scripts replay cleanly; --strict inverts that for happy-path
regression suites. Path segments starting with '@' dereference an account
seed to its address.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .dispatch import OPS
from .env import Environment
from .errors import ProtocolError
from .hashing import address_from_seed

META_OPS = ("create_account", "advance_time", "assert_event", "assert_state")

EXIT_OK = 0
EXIT_FAILURE = 1  # assertion or meta-op failure, or --strict protocol error
EXIT_PARSE = 2  # unreadable/unparseable input


class ScenarioParseError(Exception):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass
class RunOutcome:
    exit_code: int
    digest: str
    failures: list[str] = field(default_factory=list)


def parse_scenario(text: str) -> list[tuple[int, dict]]:
    """Parse scenario text to (line number, command) pairs, validating shape."""
    commands: list[tuple[int, dict]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(line_no, f"invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise ScenarioParseError(line_no, "command must be a JSON object")
        op = obj.get("op")
        if not isinstance(op, str):
            raise ScenarioParseError(line_no, "missing 'op' string")
        if op in META_OPS:
            _validate_meta(line_no, op, obj)
        else:
            if op not in OPS:
                raise ScenarioParseError(line_no, f"unknown op {op!r}")
            if not isinstance(obj.get("as"), str):
                raise ScenarioParseError(line_no, f"op {op!r} needs an 'as' sender")
            if "args" in obj and not isinstance(obj["args"], dict):
                raise ScenarioParseError(line_no, "'args' must be an object")
        commands.append((line_no, obj))
    return commands


def _validate_meta(line_no: int, op: str, obj: dict) -> None:
    if op == "create_account":
        if not isinstance(obj.get("seed"), str):
            raise ScenarioParseError(line_no, "create_account needs a 'seed' string")
    elif op == "advance_time":
        delta = obj.get("delta")
        if not isinstance(delta, int) or isinstance(delta, bool):
            raise ScenarioParseError(line_no, "advance_time needs an integer 'delta'")
    elif op == "assert_event":
        if not isinstance(obj.get("match"), dict):
            raise ScenarioParseError(line_no, "assert_event needs a 'match' object")
    elif op == "assert_state":
        if not isinstance(obj.get("path"), str):
            raise ScenarioParseError(line_no, "assert_state needs a 'path' string")
        if "equals" not in obj:
            raise ScenarioParseError(line_no, "assert_state needs 'equals'")


def _resolve_path_segment(segment: str) -> str:
    if segment.startswith("@"):
        return address_from_seed(segment[1:])
    return segment


def _lookup_state(env: Environment, path: str):
    node = env.state_view()
    for segment in path.split("/"):
        key = _resolve_path_segment(segment)
        if isinstance(node, dict):
            if key not in node:
                raise KeyError(path)
            node = node[key]
        elif isinstance(node, list):
            try:
                node = node[int(key)]
            except (ValueError, IndexError):
                raise KeyError(path) from None
        else:
            raise KeyError(path)
    return node


def _event_matches(event, match: dict) -> bool:
    if "name" in match and event.name != match["name"]:
        return False
    if "tx_index" in match and event.tx_index != int(match["tx_index"]):
        return False
    wanted = match.get("attributes", {})
    have = dict(event.attributes)
    for key, value in wanted.items():
        if have.get(key) != str(value):
            return False
    return True


def run_scenario(env: Environment, commands: list[tuple[int, dict]], strict: bool = False) -> RunOutcome:
    failures: list[str] = []
    for line_no, obj in commands:
        op = obj["op"]
        if op == "create_account":
            try:
                env.create_account(obj["seed"])
            except ProtocolError as exc:
                failures.append(f"line {line_no}: create_account failed: {exc.code}")
                break
        elif op == "advance_time":
            try:
                env.advance_time(obj["delta"])
            except ProtocolError as exc:
                failures.append(f"line {line_no}: advance_time failed: {exc.code}")
                break
        elif op == "assert_event":
            if not any(_event_matches(e, obj["match"]) for e in env.events):
                failures.append(f"line {line_no}: no event matches {obj['match']}")
                break
        elif op == "assert_state":
            try:
                actual = _lookup_state(env, obj["path"])
            except KeyError:
                failures.append(f"line {line_no}: no state at path {obj['path']!r}")
                break
            expected = obj["equals"]
            if actual != expected and json.dumps(actual, sort_keys=True) != json.dumps(
                expected, sort_keys=True
            ):
                failures.append(
                    f"line {line_no}: state {obj['path']!r} is {actual!r}, expected {expected!r}"
                )
                break
        else:
            result = env.execute(obj["as"], op, obj.get("args", {}))
            if strict and not result.ok:
                failures.append(f"line {line_no}: {op} rejected: {result.error}")
                break
    exit_code = EXIT_OK if not failures else EXIT_FAILURE
    return RunOutcome(exit_code=exit_code, digest=env.state_digest_hex(), failures=failures)


def render_event_log(env: Environment) -> str:
    return "".join(e.to_json_line() + "\n" for e in env.events)
