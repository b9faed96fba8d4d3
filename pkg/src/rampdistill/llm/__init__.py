from .client import (
    LlmConfig,
    LlmPlanner,
    http_transport,
    make_scene_executor,
    run_react_loop,
)
from .messages import (
    ChatMessage,
    DecisionParseError,
    DepthExceededError,
    DuplicateCavError,
    LlmError,
    MissingActionsError,
    MissingCavError,
    ReplayMissError,
    StoreCorruptError,
    ToolCall,
    ToolSpec,
    TransportError,
    UnknownActionError,
    UnknownCavError,
    default_tool_specs,
)
from .prompting import NO_CONFLICTS_PHRASE, decision_to_line, parse_decision, render_prompt
from .recording import (
    MODE_LIVE,
    MODE_RECORD,
    MODE_REPLAY,
    SessionStore,
    request_key,
    wrap_transport,
)

__all__ = [
    "ChatMessage",
    "DecisionParseError",
    "DepthExceededError",
    "DuplicateCavError",
    "LlmConfig",
    "LlmError",
    "LlmPlanner",
    "MissingActionsError",
    "MissingCavError",
    "MODE_LIVE",
    "MODE_RECORD",
    "MODE_REPLAY",
    "NO_CONFLICTS_PHRASE",
    "ReplayMissError",
    "SessionStore",
    "StoreCorruptError",
    "ToolCall",
    "ToolSpec",
    "TransportError",
    "UnknownActionError",
    "UnknownCavError",
    "decision_to_line",
    "default_tool_specs",
    "http_transport",
    "make_scene_executor",
    "parse_decision",
    "render_prompt",
    "request_key",
    "run_react_loop",
    "wrap_transport",
]
