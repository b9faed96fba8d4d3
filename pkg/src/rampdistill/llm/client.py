"""Bounded ReAct loop against a chat-completions endpoint.

The transport is any callable taking the request payload dict and
returning the parsed response dict, so tests inject canned transports and
the record/replay wrappers compose around the real HTTP one.
"""
from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field
from typing import Callable

import requests

from ..actions import Action
from .messages import (
    ChatMessage,
    DepthExceededError,
    LlmError,
    ToolCall,
    ToolSpec,
    TransportError,
    default_tool_specs,
)
from .prompting import parse_decision, render_prompt
from .recording import Transport

# textual ReAct fallback: a line like "Action: conflict_check({...})"
_TEXT_ACTION_RE = re.compile(r"^\s*Action:\s*([A-Za-z_][A-Za-z0-9_]*)\((.*)\)\s*$", re.MULTILINE)

ToolExecutor = dict[str, Callable[[dict], str]]


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str = "http://localhost:8000/v1/chat/completions"
    model: str = "gpt-4o"
    temperature: float = 0.0
    timeout: float = 30.0
    retries: int = 2
    backoff: float = 1.0
    max_tool_calls: int = 4
    api_key_env: str = "OPENAI_API_KEY"


def http_transport(cfg: LlmConfig) -> Transport:
    """POST {model, messages, tools} with retry-and-backoff on transient errors."""

    def send(payload: dict) -> dict:
        last: Exception | None = None
        for attempt in range(cfg.retries + 1):
            try:
                headers = {"Content-Type": "application/json"}
                api_key = os.environ.get(cfg.api_key_env)
                if api_key:
                    headers["Authorization"] = f"Bearer {api_key}"
                response = requests.post(
                    cfg.endpoint, json=payload, headers=headers, timeout=cfg.timeout
                )
                if response.status_code >= 500:
                    raise requests.HTTPError(f"server error {response.status_code}")
                response.raise_for_status()
                return response.json()
            except (requests.Timeout, requests.ConnectionError, requests.HTTPError) as exc:
                last = exc
                if attempt < cfg.retries:
                    time.sleep(cfg.backoff * (2**attempt))
        raise TransportError(f"request failed after {cfg.retries + 1} attempts: {last}")

    return send


def _extract_tool_call(message: dict) -> ToolCall | None:
    calls = message.get("tool_calls")
    if calls:
        first = calls[0]
        fn = first.get("function", {})
        return ToolCall(
            call_id=first.get("id", "call_0"),
            name=fn.get("name", ""),
            arguments=fn.get("arguments", "{}"),
        )
    content = message.get("content") or ""
    match = _TEXT_ACTION_RE.search(content)
    if match:
        return ToolCall(call_id="text_0", name=match.group(1), arguments=match.group(2))
    return None


def _parse_arguments(raw: str) -> dict:
    raw = raw.strip()
    if not raw:
        return {}
    try:
        value = json.loads(raw)
        return value if isinstance(value, dict) else {"value": value}
    except json.JSONDecodeError:
        return {"value": raw}


def run_react_loop(
    transport: Transport,
    cfg: LlmConfig,
    messages: list[ChatMessage],
    tools: tuple[ToolSpec, ...],
    executor: ToolExecutor,
) -> str:
    """Drive the tool loop until the model stops calling tools.

    Terminates within ``max_tool_calls + 1`` completions: each completion
    either ends the loop or requests one tool, and a tool request past the
    budget raises DepthExceededError.
    """
    history = list(messages)
    for tools_used in range(cfg.max_tool_calls + 1):
        payload = {
            "model": cfg.model,
            "messages": [m.to_wire() for m in history],
            "tools": [t.to_wire() for t in tools],
            "temperature": cfg.temperature,
        }
        response = transport(payload)
        try:
            message = response["choices"][0]["message"]
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed completion response: {exc}") from exc
        call = _extract_tool_call(message)
        if call is None:
            return message.get("content") or ""
        if tools_used == cfg.max_tool_calls:
            raise DepthExceededError(
                f"model kept calling tools past the budget of {cfg.max_tool_calls}"
            )
        if call.name not in executor:
            result = f"error: unknown tool {call.name!r}"
        else:
            try:
                result = executor[call.name](_parse_arguments(call.arguments))
            except Exception as exc:  # tool errors go back to the model
                result = f"error: {exc}"
        history.append(
            ChatMessage(
                role="assistant",
                content=message.get("content") or "",
                tool_calls=(call,),
            )
        )
        history.append(
            ChatMessage(role="tool", content=result, tool_call_id=call.call_id, name=call.name)
        )
    raise DepthExceededError("unreachable")


@dataclass
class LlmPlanner:
    """Planner backend wired into the teacher; satisfies the ``plan`` protocol."""

    transport: Transport
    cfg: LlmConfig = field(default_factory=LlmConfig)
    tools: tuple[ToolSpec, ...] = field(default_factory=default_tool_specs)
    executor_factory: Callable[[dict, object], ToolExecutor] | None = None

    def plan(self, descriptions: dict, report, live_ids: list[str]) -> dict[str, Action]:
        messages = render_prompt(descriptions, report)
        executor: ToolExecutor = {}
        if self.executor_factory is not None:
            executor = self.executor_factory(descriptions, report)
        final = run_react_loop(self.transport, self.cfg, messages, self.tools, executor)
        return parse_decision(final, live_ids)


def make_scene_executor(descriptions: dict, report) -> ToolExecutor:
    """Tool implementations answering from the already-computed scene."""

    def lane_query(args: dict) -> str:
        cav_id = args.get("cav_id")
        if cav_id not in descriptions:
            return f"error: unknown CAV {cav_id!r}"
        relations = descriptions[cav_id].lane_relations
        return json.dumps(
            {lane: relation.value for lane, relation in sorted(relations.items())},
            sort_keys=True,
        )

    def predict_state(args: dict) -> str:
        lines = []
        for cav_id in sorted(descriptions):
            desc = descriptions[cav_id]
            for vid in sorted(desc.neighbor_states):
                v = desc.neighbor_states[vid]
                lines.append(f"{vid}: lane {v.lane}, x {v.x:.1f} m, speed {v.speed:.1f} m/s")
            break  # neighbour states are shared; one scene suffices
        return "\n".join(lines) or "no other vehicles"

    def conflict_tool(args: dict) -> str:
        entries = list(report) if report is not None else []
        if not entries:
            return "no conflicts detected"
        return "\n".join(
            f"{e.vehicle_i} vs {e.vehicle_j}: delta-ttcp {e.delta:.2f} s, risk {e.risk}"
            for e in entries
        )

    return {"lane_query": lane_query, "predict_state": predict_state, "conflict_check": conflict_tool}
