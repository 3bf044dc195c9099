"""Command-line interface: scenario replay, state inspection, file bridge,
confidential-transfer helpers and log reports.

Exit codes: 0 success, 1 assertion/protocol/lookup failure, 2 parse or IO
error.
"""

from __future__ import annotations

import json
import sys

import click

from . import report as report_mod
from .bounties import antreview_view
from .confidential import params_from_view
from .dispatch import coerce_address
from .env import DEPLOYER_SEED, Environment
from .errors import ProtocolError
from .poe import get as poe_get
from .scenario import (
    EXIT_FAILURE,
    EXIT_PARSE,
    ScenarioParseError,
    parse_scenario,
    render_event_log,
    run_scenario,
)
from .voting import tally_view


def _load_params(path: str | None):
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return params_from_view(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        click.echo(f"error: bad params file: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _load_env(state_file: str | None, params_path: str | None) -> Environment:
    params = _load_params(params_path)
    if state_file is not None:
        try:
            env = Environment.load_state(state_file)
        except (OSError, json.JSONDecodeError, KeyError, ProtocolError) as exc:
            click.echo(f"error: cannot load state: {exc}", err=True)
            sys.exit(EXIT_PARSE)
        if params is not None:
            click.echo("error: --params cannot override a loaded state", err=True)
            sys.exit(EXIT_PARSE)
        return env
    return Environment(params=params) if params is not None else Environment()


def _save_env(env: Environment, path: str) -> None:
    try:
        env.save_state(path)
    except OSError as exc:
        click.echo(f"error: cannot save state: {exc}", err=True)
        sys.exit(EXIT_PARSE)


@click.group()
def main() -> None:
    """Deterministic bounty-based peer-review protocol engine."""


@main.command("run")
@click.argument("scenario", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), help="Write the event log here instead of stdout.")
@click.option("--strict", is_flag=True, help="Fail the run on the first protocol error.")
@click.option("--save-state", "save_state", type=click.Path(dir_okay=False))
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), help="Resume from a saved state instead of genesis.")
@click.option("--params", "params_path", type=click.Path(dir_okay=False), help="Commitment group parameters (JSON).")
def run_cmd(scenario, out, strict, save_state, state_file, params_path) -> None:
    """Execute a line-delimited scenario and print the final state digest."""
    try:
        with open(scenario, "r", encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    env = _load_env(state_file, params_path)
    try:
        commands = parse_scenario(text)
    except ScenarioParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    outcome = run_scenario(env, commands, strict=strict)
    log = render_event_log(env)
    if out is not None:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(log)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
    else:
        click.echo(log, nl=False)
    if save_state is not None:
        _save_env(env, save_state)
    for failure in outcome.failures:
        click.echo(f"FAIL {failure}", err=True)
    click.echo(outcome.digest)
    sys.exit(outcome.exit_code)


def _show_value(env: Environment, what: str, ident: str):
    if what == "antreview":
        item = env.bounties.items.get(int(ident))
        if item is None:
            return None
        return antreview_view(item)
    if what == "balance":
        addr = coerce_address(ident)
        return {"address": addr, "balance": str(env.token.balance_of(addr))}
    if what == "note":
        note = env.confidential.notes.get(int(ident))
        if note is None:
            return None
        return {
            "note_id": note.note_id,
            "commitment": env.confidential.params.render(note.commitment),
            "owner": note.owner,
            "spent": note.spent,
        }
    if what == "tally":
        tally = env.voting.tallies.get(int(ident))
        if tally is None:
            return None
        return tally_view(tally)
    return None


@main.command("show")
@click.argument("what", type=click.Choice(["antreview", "balance", "note", "tally"]))
@click.argument("ident")
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), required=True)
def show_cmd(what, ident, state_file) -> None:
    """Print one object from a saved state as canonical JSON."""
    env = _load_env(state_file, None)
    try:
        value = _show_value(env, what, ident)
    except (ValueError, ProtocolError):
        value = None
    if value is None:
        click.echo(f"error: unknown {what} {ident!r}", err=True)
        sys.exit(EXIT_FAILURE)
    click.echo(json.dumps(value, sort_keys=True, separators=(",", ":")))


@main.command("show-antreview")
@click.argument("ident")
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def show_antreview_cmd(ctx, ident, state_file) -> None:
    """Alias for `show antreview`."""
    ctx.invoke(show_cmd, what="antreview", ident=ident, state_file=state_file)


def _execute_or_die(env: Environment, sender: str, op: str, args: dict):
    result = env.execute(sender, op, args)
    if not result.ok:
        click.echo(f"error: {op} rejected: {result.error}", err=True)
        sys.exit(EXIT_FAILURE)
    return result


def _write_back(env: Environment, state_file: str, save_state: str | None) -> None:
    _save_env(env, save_state if save_state is not None else state_file)


@main.command("put-file")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), required=True)
@click.option("--save-state", "save_state", type=click.Path(dir_okay=False))
@click.option("--as", "sender", default=DEPLOYER_SEED, help="Acting account (seed or address).")
def put_file_cmd(path, state_file, save_state, sender) -> None:
    """Load a file into the content store; prints its content hash."""
    try:
        with open(path, "rb") as fh:
            content = fh.read()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    env = _load_env(state_file, None)
    result = _execute_or_die(env, sender, "put", {"content": content})
    _write_back(env, state_file, save_state)
    click.echo(result.value)


@main.command("get-file")
@click.argument("content_hash")
@click.argument("out_path", type=click.Path(dir_okay=False))
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), required=True)
def get_file_cmd(content_hash, out_path, state_file) -> None:
    """Write stored content back to disk."""
    env = _load_env(state_file, None)
    try:
        data = poe_get(env.poe, content_hash.lower())
    except ProtocolError:
        click.echo(f"error: unknown hash {content_hash}", err=True)
        sys.exit(EXIT_FAILURE)
    try:
        with open(out_path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)


@main.command("shield")
@click.option("--as", "sender", required=True)
@click.option("--amount", required=True)
@click.option("--r", "randomness", required=True)
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), required=True)
@click.option("--save-state", "save_state", type=click.Path(dir_okay=False))
def shield_cmd(sender, amount, randomness, state_file, save_state) -> None:
    """Convert public ANTS into a value-hiding note."""
    env = _load_env(state_file, None)
    result = _execute_or_die(env, sender, "shield", {"amount": amount, "r": randomness})
    _write_back(env, state_file, save_state)
    note = env.confidential.notes[result.value]
    click.echo(
        json.dumps(
            {
                "note_id": note.note_id,
                "commitment": env.confidential.params.render(note.commitment),
            },
            sort_keys=True,
        )
    )


@main.command("join-split")
@click.argument("request_path", type=click.Path(dir_okay=False))
@click.option("--as", "sender", required=True)
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), required=True)
@click.option("--save-state", "save_state", type=click.Path(dir_okay=False))
def join_split_cmd(request_path, sender, state_file, save_state) -> None:
    """Spend input notes into new output notes (request JSON on disk)."""
    try:
        with open(request_path, "r", encoding="utf-8") as fh:
            request = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: bad request file: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    env = _load_env(state_file, None)
    result = _execute_or_die(env, sender, "join_split", request)
    _write_back(env, state_file, save_state)
    click.echo(json.dumps({"output_note_ids": result.value}, sort_keys=True))


@main.command("unshield")
@click.option("--as", "sender", required=True)
@click.option("--note-id", "note_id", required=True)
@click.option("--v", "value", required=True)
@click.option("--r", "randomness", required=True)
@click.option("--state-file", "state_file", type=click.Path(dir_okay=False), required=True)
@click.option("--save-state", "save_state", type=click.Path(dir_okay=False))
def unshield_cmd(sender, note_id, value, randomness, state_file, save_state) -> None:
    """Open a note and mint its value back to the public balance."""
    env = _load_env(state_file, None)
    result = _execute_or_die(
        env, sender, "unshield", {"note_id": note_id, "v": value, "r": randomness}
    )
    _write_back(env, state_file, save_state)
    click.echo(str(result.value))


@main.command("report")
@click.argument("event_log", type=click.Path(dir_okay=False))
@click.option("--out-dir", "out_dir", type=click.Path(file_okay=False), required=True)
def report_cmd(event_log, out_dir) -> None:
    """Render an event log into CSV tables and figures."""
    try:
        with open(event_log, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    try:
        events = report_mod.parse_event_log(text)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    for path in report_mod.render_report(events, out_dir):
        click.echo(path)


if __name__ == "__main__":
    main()
