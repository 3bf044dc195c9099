"""CLI surfaces: run/show/put-file/get-file, confidential commands, report."""

import json
import os
import pathlib
import subprocess
import sys

import pytest

REPO = pathlib.Path(__file__).resolve().parent.parent
SCENARIOS = REPO / "scenarios"


def cli(*args, env_overrides=None, cwd=None):
    env = dict(os.environ)
    if env_overrides:
        env.update(env_overrides)
    return subprocess.run(
        [sys.executable, "-m", "antsreview.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd or str(REPO),
    )


@pytest.fixture
def funded_state(tmp_path):
    """State file with a funded 'alice' account."""
    scenario = tmp_path / "setup.jsonl"
    scenario.write_text(
        '{"op": "create_account", "seed": "alice"}\n'
        '{"op": "create_account", "seed": "bob"}\n'
        '{"as": "alice", "op": "faucet_drip"}\n'
    )
    state = tmp_path / "state.json"
    result = cli("run", str(scenario), "--save-state", str(state), "--out", os.devnull)
    assert result.returncode == 0, result.stderr
    return state


class TestRun:
    def test_empty_file_exits_zero_with_genesis_digest(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        result = cli("run", str(empty))
        assert result.returncode == 0
        digest = result.stdout.strip()
        assert digest.startswith("0x") and len(digest) == 66
        from antsreview import Environment

        assert digest == Environment().state_digest_hex()

    def test_same_file_twice_is_byte_identical(self):
        first = cli("run", str(SCENARIOS / "narrative.jsonl"))
        second = cli("run", str(SCENARIOS / "narrative.jsonl"))
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout

    def test_hash_seed_variation_does_not_change_output(self):
        a = cli("run", str(SCENARIOS / "voting.jsonl"), env_overrides={"PYTHONHASHSEED": "1"})
        b = cli("run", str(SCENARIOS / "voting.jsonl"), env_overrides={"PYTHONHASHSEED": "2"})
        assert a.stdout == b.stdout

    def test_parse_error_exits_two_with_line_number(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"op": "create_account", "seed": "x"}\nnot json\n')
        result = cli("run", str(bad))
        assert result.returncode == 2
        assert "line 2" in result.stderr

    def test_unknown_op_exits_two_with_line_number(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"as": "a", "op": "explode"}\n')
        result = cli("run", str(bad))
        assert result.returncode == 2
        assert "line 1" in result.stderr and "explode" in result.stderr

    def test_failed_assert_exits_one(self, tmp_path):
        bad = tmp_path / "assert.jsonl"
        bad.write_text('{"op": "assert_event", "match": {"name": "NeverHappened"}}\n')
        result = cli("run", str(bad))
        assert result.returncode == 1
        assert "line 1" in result.stderr

    def test_protocol_errors_are_data_unless_strict(self, tmp_path):
        s = tmp_path / "err.jsonl"
        s.write_text(
            '{"op": "create_account", "seed": "a"}\n'
            '{"as": "a", "op": "transfer", "args": {"to": "b", "amount": 5}}\n'
        )
        relaxed = cli("run", str(s))
        assert relaxed.returncode == 0
        assert '"name":"Error"' in relaxed.stdout
        strict = cli("run", str(s), "--strict")
        assert strict.returncode == 1

    def test_out_flag_writes_log_file(self, tmp_path):
        out = tmp_path / "log.jsonl"
        result = cli("run", str(SCENARIOS / "refund.jsonl"), "--out", str(out))
        assert result.returncode == 0
        lines = out.read_text().splitlines()
        assert lines and all(json.loads(l)["name"] for l in lines)
        # stdout carries only the digest
        assert result.stdout.strip().startswith("0x")

    def test_save_and_resume_preserves_digest(self, tmp_path):
        state = tmp_path / "state.json"
        first = cli(
            "run", str(SCENARIOS / "narrative.jsonl"),
            "--save-state", str(state), "--out", os.devnull,
        )
        assert first.returncode == 0
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        resumed = cli("run", str(empty), "--state-file", str(state), "--out", os.devnull)
        assert resumed.returncode == 0
        assert resumed.stdout.strip() == first.stdout.strip()


class TestShow:
    def test_show_balance_of_fresh_account(self, funded_state, tmp_path):
        result = cli("show", "balance", "nobody", "--state-file", str(funded_state))
        assert result.returncode == 0
        assert json.loads(result.stdout)["balance"] == "0"

    def test_show_antreview_roundtrip(self, tmp_path):
        state = tmp_path / "state.json"
        assert cli(
            "run", str(SCENARIOS / "narrative.jsonl"),
            "--save-state", str(state), "--out", os.devnull,
        ).returncode == 0
        result = cli("show", "antreview", "0", "--state-file", str(state))
        assert result.returncode == 0
        view = json.loads(result.stdout)
        assert view["balance"] == "0"
        assert view["paper_hash"].startswith("0x")
        alias = cli("show-antreview", "0", "--state-file", str(state))
        assert alias.stdout == result.stdout

    def test_show_unknown_id_exits_one(self, funded_state):
        result = cli("show", "antreview", "7", "--state-file", str(funded_state))
        assert result.returncode == 1

    def test_show_note_and_tally(self, tmp_path):
        state = tmp_path / "state.json"
        assert cli(
            "run", str(SCENARIOS / "confidential.jsonl"),
            "--save-state", str(state), "--out", os.devnull,
        ).returncode == 0
        note = cli("show", "note", "0", "--state-file", str(state))
        assert note.returncode == 0
        assert json.loads(note.stdout)["spent"] is True
        state2 = tmp_path / "state2.json"
        assert cli(
            "run", str(SCENARIOS / "voting.jsonl"),
            "--save-state", str(state2), "--out", os.devnull,
        ).returncode == 0
        tally = cli("show", "tally", "0", "--state-file", str(state2))
        assert tally.returncode == 0
        assert json.loads(tally.stdout)["finalized"] is True


class TestFileBridge:
    def test_put_then_get_round_trips(self, funded_state, tmp_path):
        payload = tmp_path / "paper.bin"
        payload.write_bytes(bytes(range(256)) * 3)
        put = cli("put-file", str(payload), "--state-file", str(funded_state))
        assert put.returncode == 0, put.stderr
        content_hash = put.stdout.strip()
        assert content_hash.startswith("0x") and len(content_hash) == 66
        out = tmp_path / "back.bin"
        got = cli("get-file", content_hash, str(out), "--state-file", str(funded_state))
        assert got.returncode == 0
        assert out.read_bytes() == payload.read_bytes()

    def test_put_same_content_same_hash(self, funded_state, tmp_path):
        payload = tmp_path / "doc.txt"
        payload.write_text("identical bytes")
        h1 = cli("put-file", str(payload), "--state-file", str(funded_state)).stdout
        h2 = cli("put-file", str(payload), "--state-file", str(funded_state)).stdout
        assert h1 == h2

    def test_get_unknown_hash_exits_one(self, funded_state, tmp_path):
        missing = "0x" + "ab" * 32
        result = cli("get-file", missing, str(tmp_path / "x"), "--state-file", str(funded_state))
        assert result.returncode == 1


class TestConfidentialCommands:
    def test_shield_joinsplit_unshield_flow(self, funded_state, tmp_path):
        from antsreview import DEFAULT_PARAMS as P

        shielded = cli(
            "shield", "--as", "alice", "--amount", "500", "--r", "12345",
            "--state-file", str(funded_state),
        )
        assert shielded.returncode == 0, shielded.stderr
        note = json.loads(shielded.stdout)
        assert note["note_id"] == 0

        r1, r2 = 999, (12345 - 999) % P.q
        c1 = (pow(P.g, 200, P.p) * pow(P.h, r1, P.p)) % P.p
        c2 = (pow(P.g, 300, P.p) * pow(P.h, r2, P.p)) % P.p
        request = tmp_path / "req.json"
        request.write_text(json.dumps({
            "input_note_ids": [0],
            "output_commitments": [P.render(c1), P.render(c2)],
            "output_owners": ["alice", "bob"],
            "randomness_balance_proof": "0",
        }))
        js = cli(
            "join-split", str(request), "--as", "alice",
            "--state-file", str(funded_state),
        )
        assert js.returncode == 0, js.stderr
        assert json.loads(js.stdout)["output_note_ids"] == [1, 2]

        un = cli(
            "unshield", "--as", "bob", "--note-id", "2", "--v", "300",
            "--r", str(r2), "--state-file", str(funded_state),
        )
        assert un.returncode == 0, un.stderr
        assert un.stdout.strip() == "300"

    def test_rejected_op_exits_one(self, funded_state):
        result = cli(
            "shield", "--as", "alice", "--amount", "10", "--r", "-3",
            "--state-file", str(funded_state),
        )
        assert result.returncode == 1


class TestParamsFile:
    def test_toy_params_loaded(self, tmp_path):
        params = tmp_path / "toy.json"
        params.write_text('{"p": "23", "q": "11", "g": "2", "h": "4"}')
        scenario = tmp_path / "s.jsonl"
        scenario.write_text(
            '{"op": "create_account", "seed": "a"}\n'
            '{"as": "a", "op": "faucet_drip"}\n'
            '{"as": "a", "op": "shield", "args": {"amount": 3, "r": 5}}\n'
            '{"op": "assert_state", "path": "confidential/notes/0/commitment", "equals": "0x04"}\n'
        )
        result = cli("run", str(scenario), "--params", str(params), "--out", os.devnull)
        assert result.returncode == 0, result.stderr


class TestReport:
    def test_report_writes_tables_and_figures(self, tmp_path):
        log = tmp_path / "log.jsonl"
        assert cli(
            "run", str(SCENARIOS / "voting.jsonl"), "--out", str(log)
        ).returncode == 0
        out_dir = tmp_path / "report"
        result = cli("report", str(log), "--out-dir", str(out_dir))
        assert result.returncode == 0, result.stderr
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == [
            "event_counts.png", "events.csv", "payouts.png",
            "token_flows.png", "transfers.csv",
        ]
        events_csv = (out_dir / "events.csv").read_text().splitlines()
        assert events_csv[0] == "tx_index,name,attributes"
        assert len(events_csv) > 10
        for png in ("event_counts.png", "token_flows.png", "payouts.png"):
            assert (out_dir / png).stat().st_size > 1000

    def test_report_tolerates_trailing_digest_line(self, tmp_path):
        run = cli("run", str(SCENARIOS / "refund.jsonl"))
        log = tmp_path / "combined.log"
        log.write_text(run.stdout)  # events plus digest line
        result = cli("report", str(log), "--out-dir", str(tmp_path / "r"))
        assert result.returncode == 0, result.stderr
