from .buffer import ExpertBuffer, Transition
from .losses import (
    N_ACTIONS,
    actor_loss_and_grads,
    advantage,
    critic_loss_and_grads,
    discounted_returns,
    kl_divergence,
    teacher_distribution,
)
from .nets import (
    MlpGrads,
    MlpParams,
    forward_actor,
    forward_critic,
    init_mlp,
    mlp_backward,
    mlp_forward,
    softmax,
)
from .optim import RmsProp, clip_global_norm
from .trainer import (
    CURVE_COLUMNS,
    AgentNets,
    AnnealSchedule,
    TrainConfig,
    TrainResult,
    agent_index,
    agents_from_checkpoint,
    build_agents,
    evaluate_policies,
    greedy_action,
    load_checkpoint,
    sample_action,
    save_checkpoint,
    train,
    train_baseline,
)

__all__ = [
    "AgentNets",
    "AnnealSchedule",
    "CURVE_COLUMNS",
    "ExpertBuffer",
    "MlpGrads",
    "MlpParams",
    "N_ACTIONS",
    "RmsProp",
    "TrainConfig",
    "TrainResult",
    "Transition",
    "actor_loss_and_grads",
    "advantage",
    "agent_index",
    "agents_from_checkpoint",
    "build_agents",
    "clip_global_norm",
    "critic_loss_and_grads",
    "discounted_returns",
    "evaluate_policies",
    "forward_actor",
    "forward_critic",
    "greedy_action",
    "init_mlp",
    "kl_divergence",
    "load_checkpoint",
    "mlp_backward",
    "mlp_forward",
    "sample_action",
    "save_checkpoint",
    "softmax",
    "teacher_distribution",
    "train",
    "train_baseline",
]
