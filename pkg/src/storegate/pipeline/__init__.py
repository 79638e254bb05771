"""Toy event-processing pipeline built on the blackboard store."""

from .algorithms import Algorithm, AlgContext, builtin_algorithms, register_algorithm
from .config import AlgorithmSpec, Mode, PipelineConfig, load_pipeline_config, parse_pipeline_config
from .runner import EventLoop, EventReport, RunReport, replay_consume, run_pipeline

__all__ = [
    "AlgContext",
    "Algorithm",
    "AlgorithmSpec",
    "EventLoop",
    "EventReport",
    "Mode",
    "PipelineConfig",
    "RunReport",
    "builtin_algorithms",
    "load_pipeline_config",
    "parse_pipeline_config",
    "register_algorithm",
    "replay_consume",
    "run_pipeline",
]
