"""Prompt rendering and decision parsing for the planner backend.

The model must end with one line of the form::

    ACTIONS: {"cav0": "cruise", "cav1": "slow_down"}

covering every live CAV with one of the five action tokens.  Rendering is
deterministic so recorded sessions replay byte-identically.
"""
from __future__ import annotations

import json
import re

from ..actions import Action
from .messages import (
    ChatMessage,
    DuplicateCavError,
    MissingActionsError,
    MissingCavError,
    UnknownActionError,
    UnknownCavError,
)

ACTION_TOKENS = tuple(action.token for action in Action)

NO_CONFLICTS_PHRASE = "no conflicts detected"

_SYSTEM_TEMPLATE = """\
You are the expert planner coordinating connected autonomous vehicles (CAVs) \
through a highway ramp merge. Each CAV takes exactly one action this second.
Legal actions (use these exact tokens): {tokens}.
You may call the provided tools to inspect lanes, predict vehicle states, or \
re-check conflicts before deciding.
Finish with a single last line of the form:
ACTIONS: {schema}
covering exactly these CAVs: {ids}."""

_ACTIONS_RE = re.compile(r"ACTIONS:\s*(\{.*\})\s*$")


def render_prompt(descriptions: dict, report) -> list[ChatMessage]:
    """System + user message pair for one joint decision."""
    if not descriptions:
        raise ValueError("at least one CAV scene description is required")
    ids = sorted(descriptions)
    schema = json.dumps({cav_id: "<action>" for cav_id in ids}, sort_keys=True)
    system = _SYSTEM_TEMPLATE.format(
        tokens=", ".join(ACTION_TOKENS), schema=schema, ids=", ".join(ids)
    )

    sections = []
    for cav_id in ids:
        sections.append(f"## Scene for {cav_id}\n{descriptions[cav_id].text}")
    entries = list(report) if report is not None else []
    if entries:
        lines = [
            f"- {e.vehicle_i} vs {e.vehicle_j}: ttcp {e.ttcp_i:.1f} s / {e.ttcp_j:.1f} s, "
            f"gap {e.delta:.1f} s, risk {e.risk}"
            for e in entries
        ]
        sections.append("## Conflicts\n" + "\n".join(lines))
    else:
        sections.append(f"## Conflicts\n{NO_CONFLICTS_PHRASE}.")
    user = "\n\n".join(sections)
    return [ChatMessage("system", system), ChatMessage("user", user)]


def decision_to_line(decision: dict[str, Action]) -> str:
    """Canonical final line for a decision map (inverse of parse_decision)."""
    payload = {cav_id: decision[cav_id].token for cav_id in sorted(decision)}
    return "ACTIONS: " + json.dumps(payload, sort_keys=True)


def parse_decision(text: str, live_ids: list[str] | set[str]) -> dict[str, Action]:
    """Parse the last ACTIONS line into a CAV -> Action map.

    Tokens match case-insensitively with spaces/underscores ignored.  Every
    live CAV must appear exactly once; anything else raises a distinct
    error so the caller can fall back.
    """
    match = None
    for line in text.splitlines():
        found = _ACTIONS_RE.search(line.strip())
        if found:
            match = found
    if match is None:
        raise MissingActionsError("no ACTIONS line in model output")

    pairs: list[tuple[str, str]] = []
    try:
        json.loads(match.group(1), object_pairs_hook=lambda p: pairs.extend(p) or dict(p))
    except json.JSONDecodeError as exc:
        raise MissingActionsError(f"ACTIONS line is not valid JSON: {exc}") from exc

    live = set(live_ids)
    decision: dict[str, Action] = {}
    for cav_id, token in pairs:
        if cav_id in decision:
            raise DuplicateCavError(f"duplicate CAV id in decision: {cav_id}")
        if cav_id not in live:
            raise UnknownCavError(f"decision names unknown CAV: {cav_id}")
        if not isinstance(token, str):
            raise UnknownActionError(f"action for {cav_id} is not a string: {token!r}")
        try:
            decision[cav_id] = Action.from_token(token)
        except ValueError as exc:
            raise UnknownActionError(str(exc)) from exc
    missing = sorted(live - set(decision))
    if missing:
        raise MissingCavError(f"decision misses CAVs: {missing}")
    return decision
