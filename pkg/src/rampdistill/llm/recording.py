"""Record/replay of planner sessions for deterministic, offline tests.

The store is a JSON-lines file; each line holds the request key, the raw
response text and a checksum over both.  Replay looks up exact request
keys and never touches the network.
"""
from __future__ import annotations

import hashlib
import json
import os
from typing import Callable

from .messages import ReplayMissError, StoreCorruptError

MODE_LIVE = "live"
MODE_RECORD = "record"
MODE_REPLAY = "replay"

Transport = Callable[[dict], dict]


def request_key(payload: dict) -> str:
    """Exact-match key over the model id and full message list."""
    basis = json.dumps(
        {"model": payload.get("model"), "messages": payload.get("messages", [])},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(basis.encode()).hexdigest()


def _line_checksum(key: str, response: str) -> str:
    return hashlib.sha256((key + response).encode()).hexdigest()


class SessionStore:
    """Append-only JSONL store of (request key, raw response text)."""

    def __init__(self, path: str):
        self.path = path
        self._records: dict[str, str] = {}
        if os.path.exists(path):
            self._load()

    def _load(self) -> None:
        with open(self.path) as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    key = record["key"]
                    response = record["response"]
                    checksum = record["checksum"]
                except (json.JSONDecodeError, KeyError) as exc:
                    raise StoreCorruptError(f"{self.path}:{line_no}: unreadable record") from exc
                if _line_checksum(key, response) != checksum:
                    raise StoreCorruptError(f"{self.path}:{line_no}: checksum mismatch")
                self._records[key] = response

    def __len__(self) -> int:
        return len(self._records)

    def lookup(self, key: str) -> str | None:
        return self._records.get(key)

    def append(self, key: str, response: str) -> None:
        self._records[key] = response
        with open(self.path, "a") as fh:
            fh.write(
                json.dumps(
                    {"key": key, "response": response, "checksum": _line_checksum(key, response)},
                    sort_keys=True,
                )
            )
            fh.write("\n")


def wrap_transport(
    mode: str, inner: Transport | None = None, store: SessionStore | None = None
) -> Transport:
    """Build the live / record / replay transport.

    ``record`` forwards to the inner transport and appends every response;
    ``replay`` resolves from the store only (a miss raises, the network is
    never touched); ``live`` passes straight through.
    """
    if mode == MODE_LIVE:
        if inner is None:
            raise ValueError("live mode needs an inner transport")
        return inner
    if mode == MODE_RECORD:
        if inner is None or store is None:
            raise ValueError("record mode needs an inner transport and a store")

        def record(payload: dict) -> dict:
            response = inner(payload)
            store.append(request_key(payload), json.dumps(response, sort_keys=True))
            return response

        return record
    if mode == MODE_REPLAY:
        if store is None:
            raise ValueError("replay mode needs an existing store")

        def replay(payload: dict) -> dict:
            key = request_key(payload)
            raw = store.lookup(key)
            if raw is None:
                raise ReplayMissError(f"no recorded response for request {key[:12]}…")
            return json.loads(raw)

        return replay
    raise ValueError(f"unknown transport mode: {mode!r}")
