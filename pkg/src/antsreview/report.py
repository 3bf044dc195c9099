"""Render an event log into delimited tables and matplotlib figures.

Intended for eyeballing scenario runs: what happened, how value moved
through the escrow, and who ended up getting paid. Input is the canonical
line-delimited event log emitted by `run`.
"""

from __future__ import annotations

import csv
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .runtime import Event
from .token import ESCROW_ADDRESS


def parse_event_log(text: str) -> list[Event]:
    events = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or not line.startswith("{"):
            continue  # tolerate the trailing digest line
        try:
            events.append(Event.from_obj(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"line {line_no}: not an event record ({exc})") from None
    return events


def _short_addr(addr: str) -> str:
    return addr[:10] + ".." if len(addr) > 12 else addr


def write_events_csv(events: list[Event], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tx_index", "name", "attributes"])
        for e in events:
            writer.writerow(
                [e.tx_index, e.name, ";".join(f"{k}={v}" for k, v in e.attributes)]
            )


def write_transfers_csv(events: list[Event], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tx_index", "from", "to", "amount"])
        for e in events:
            if e.name != "Transfer":
                continue
            attrs = dict(e.attributes)
            writer.writerow([e.tx_index, attrs["from"], attrs["to"], attrs["amount"]])


def _fig_event_counts(events: list[Event], path: str) -> None:
    counts: dict[str, int] = {}
    for e in events:
        counts[e.name] = counts.get(e.name, 0) + 1
    names = sorted(counts)
    fig, ax = plt.subplots(figsize=(8, max(2.5, 0.4 * len(names) + 1)))
    ax.barh(names, [counts[n] for n in names], color="#4878a8")
    ax.set_xlabel("events")
    ax.set_title("Event counts")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _fig_token_flows(events: list[Event], path: str) -> None:
    xs, escrow, supply = [0], [0], [0]
    escrow_bal = 0
    total_supply = 0
    for e in events:
        attrs = dict(e.attributes)
        if e.name == "Transfer":
            amount = int(attrs["amount"])
            if attrs["to"] == ESCROW_ADDRESS:
                escrow_bal += amount
            if attrs["from"] == ESCROW_ADDRESS:
                escrow_bal -= amount
        elif e.name == "Drip":
            total_supply += int(attrs["amount"])
        elif e.name == "Shielded":
            total_supply -= int(attrs["amount"])
        elif e.name == "Unshielded":
            total_supply += int(attrs["amount"])
        else:
            continue
        xs.append(e.tx_index)
        escrow.append(escrow_bal)
        supply.append(total_supply)
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.step(xs, supply, where="post", label="public supply", color="#c06030")
    ax.step(xs, escrow, where="post", label="escrow balance", color="#4878a8")
    ax.set_xlabel("transaction index")
    ax.set_ylabel("ANTS base units")
    ax.set_title("Token flows")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _fig_payouts(events: list[Event], path: str) -> None:
    paid: dict[str, int] = {}
    for e in events:
        if e.name != "Transfer":
            continue
        attrs = dict(e.attributes)
        if attrs["from"] == ESCROW_ADDRESS:
            paid[attrs["to"]] = paid.get(attrs["to"], 0) + int(attrs["amount"])
    recipients = sorted(paid)
    fig, ax = plt.subplots(figsize=(8, max(2.5, 0.4 * len(recipients) + 1)))
    if recipients:
        ax.barh(
            [_short_addr(a) for a in recipients],
            [paid[a] for a in recipients],
            color="#60a060",
        )
    ax.set_xlabel("ANTS base units paid out of escrow")
    ax.set_title("Escrow payouts by recipient")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report(events: list[Event], out_dir: str) -> list[str]:
    """Write CSV tables and figures; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, writer in [
        ("events.csv", write_events_csv),
        ("transfers.csv", write_transfers_csv),
    ]:
        path = os.path.join(out_dir, name)
        writer(events, path)
        written.append(path)
    for name, fig_fn in [
        ("event_counts.png", _fig_event_counts),
        ("token_flows.png", _fig_token_flows),
        ("payouts.png", _fig_payouts),
    ]:
        path = os.path.join(out_dir, name)
        fig_fn(events, path)
        written.append(path)
    return written
