"""Maximum flow in directed planar networks with arc and vertex
capacities and several sources and sinks."""

from .bounded import solve_bounded
from .embedding import Embedding, build_embedding
from .errors import InvariantViolation, PlanarFlowError
from .flow import Flow, FlowNetwork, flow_value, is_feasible
from .generate import GenParams, generate
from .instance import parse_flow, parse_instance, write_flow, write_instance
from .k3 import solve_k3
from .oracle import oracle_maxflow
from .scaling import solve_scaling

__all__ = [
    "Embedding",
    "Flow",
    "FlowNetwork",
    "GenParams",
    "InvariantViolation",
    "PlanarFlowError",
    "build_embedding",
    "flow_value",
    "generate",
    "is_feasible",
    "oracle_maxflow",
    "parse_flow",
    "parse_instance",
    "solve_bounded",
    "solve_k3",
    "solve_scaling",
    "write_flow",
    "write_instance",
]
