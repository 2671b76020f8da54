"""Bandit-guided stylistic attacks on LLM judges, with offline planted-bias tooling."""

from .attack import AttackResult, AttackRunConfig, CandidatePool, compute_run_metrics, run_attack
from .bandit import BanditConfig, LinUCB
from .stylometry import FEATURE_NAMES, extract_features

__all__ = [
    "AttackResult",
    "AttackRunConfig",
    "BanditConfig",
    "CandidatePool",
    "FEATURE_NAMES",
    "LinUCB",
    "compute_run_metrics",
    "extract_features",
    "run_attack",
]

__version__ = "0.1.0"
