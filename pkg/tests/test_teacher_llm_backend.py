from rampdistill.actions import Action
from rampdistill.llm import LlmConfig, LlmPlanner, decision_to_line, make_scene_executor
from rampdistill.sim import EnvConfig, EnvState, MergeEnv, VehicleState, build_road
from rampdistill.teacher import available_actions, teacher_decide


def completion(content):
    return {"choices": [{"message": {"role": "assistant", "content": content}}]}


class CannedTransport:
    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def __call__(self, payload):
        self.requests.append(payload)
        if not self.responses:
            raise AssertionError("transport exhausted")
        return self.responses.pop(0)


def make_planner(responses):
    return LlmPlanner(
        transport=CannedTransport(responses),
        cfg=LlmConfig(),
        executor_factory=make_scene_executor,
    )


def test_llm_backend_actions_flow_through():
    env = MergeEnv(EnvConfig(density="easy"))
    state, _ = env.reset(13)
    live = sorted(v.vehicle_id for v in state.live_cavs())
    line = decision_to_line({cav_id: Action.CRUISE for cav_id in live})
    planner = make_planner([completion(line)])
    decision = teacher_decide(
        state, env.config, env.road, backend="llm", llm_planner=planner, rng=0
    )
    assert sorted(decision.actions) == live
    assert decision.fallback is False


def test_planner_failure_falls_back_to_oracle_and_flags():
    env = MergeEnv(EnvConfig(density="easy"))
    state, _ = env.reset(13)
    planner = make_planner([completion("no actions line here at all")])
    decision = teacher_decide(
        state, env.config, env.road, backend="llm", llm_planner=planner, rng=0
    )
    assert decision.fallback is True
    assert sorted(decision.actions) == sorted(v.vehicle_id for v in state.live_cavs())


def test_unavailable_action_is_substituted_by_safety_check():
    road = build_road(1)
    cfg = EnvConfig()
    # lone CAV on the single through lane: change_left is not available
    cav = VehicleState(
        vehicle_id="cav0",
        kind="CAV",
        x=100.0,
        y=road.lane("main0").y,
        speed=25.0,
        heading=0.0,
        lane="main0",
        target_speed=25.0,
        target_lane="main0",
    )
    state = EnvState(time=0.0, vehicles=[cav])
    planner = make_planner([completion('ACTIONS: {"cav0": "change_left"}')])
    decision = teacher_decide(state, cfg, road, backend="llm", llm_planner=planner, rng=0)
    assert decision.fallback is False
    assert decision.initial_plan["cav0"] == Action.CHANGE_LEFT
    assert decision.provenance["cav0"] == "safety"
    assert decision.actions["cav0"] in available_actions(state, road, "cav0")


def test_tool_roundtrip_with_scene_executor():
    env = MergeEnv(EnvConfig(density="medium"))
    state, _ = env.reset(8)
    live = sorted(v.vehicle_id for v in state.live_cavs())
    line = decision_to_line({cav_id: Action.CRUISE for cav_id in live})
    planner = make_planner(
        [
            completion("Action: conflict_check({})"),
            completion(f"Thought: fine.\n{line}"),
        ]
    )
    decision = teacher_decide(
        state, env.config, env.road, backend="llm", llm_planner=planner, rng=0
    )
    assert sorted(decision.actions) == live
    # two completions were used: one tool turn plus the final decision
    assert len(planner.transport.requests) == 2
