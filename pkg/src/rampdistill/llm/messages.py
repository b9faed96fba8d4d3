"""Chat message/tool structures and the client error taxonomy."""
from __future__ import annotations

from dataclasses import dataclass, field


class LlmError(Exception):
    """Base class for all planner-backend failures."""


class TransportError(LlmError):
    """HTTP failure that survived the retry budget."""


class DepthExceededError(LlmError):
    """The model kept calling tools past the allowed loop depth."""


class DecisionParseError(LlmError):
    """Base class for malformed final decisions."""


class MissingActionsError(DecisionParseError):
    """No line matching the ACTIONS grammar was found."""


class UnknownActionError(DecisionParseError):
    """An action token outside the closed five-action set."""


class MissingCavError(DecisionParseError):
    """The decision does not cover every live CAV."""


class DuplicateCavError(DecisionParseError):
    """The same CAV id appears twice in the decision."""


class UnknownCavError(DecisionParseError):
    """The decision names a CAV that is not in the scene."""


class ReplayMissError(LlmError):
    """Replay-mode lookup had no recorded response for the request."""


class StoreCorruptError(LlmError):
    """A session-store line failed its checksum."""


@dataclass(frozen=True)
class ToolCall:
    call_id: str
    name: str
    arguments: str  # raw JSON text


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant | tool
    content: str = ""
    tool_calls: tuple[ToolCall, ...] = ()
    tool_call_id: str | None = None
    name: str | None = None

    def __post_init__(self) -> None:
        if not self.content and not self.tool_calls:
            raise ValueError("message needs content or a tool call payload")

    def to_wire(self) -> dict:
        wire: dict = {"role": self.role, "content": self.content}
        if self.tool_calls:
            wire["tool_calls"] = [
                {
                    "id": call.call_id,
                    "type": "function",
                    "function": {"name": call.name, "arguments": call.arguments},
                }
                for call in self.tool_calls
            ]
        if self.tool_call_id is not None:
            wire["tool_call_id"] = self.tool_call_id
        if self.name is not None:
            wire["name"] = self.name
        return wire


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    parameters: dict = field(default_factory=dict)

    def to_wire(self) -> dict:
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": self.description,
                "parameters": self.parameters
                or {"type": "object", "properties": {}, "required": []},
            },
        }


def default_tool_specs() -> tuple[ToolSpec, ...]:
    """The three scene tools the planner may call before deciding."""
    cav_arg = {
        "type": "object",
        "properties": {"cav_id": {"type": "string", "description": "id of the CAV"}},
        "required": ["cav_id"],
    }
    return (
        ToolSpec(
            name="lane_query",
            description="Lane layout around one CAV: its lane, adjacent lanes and conflicting lanes.",
            parameters=cav_arg,
        ),
        ToolSpec(
            name="predict_state",
            description="Predicted positions of every vehicle a few seconds ahead if all CAVs cruise.",
            parameters={"type": "object", "properties": {}, "required": []},
        ),
        ToolSpec(
            name="conflict_check",
            description="All pairwise conflicts with time-to-conflict-point gaps and risk levels.",
            parameters={"type": "object", "properties": {}, "required": []},
        ),
    )
