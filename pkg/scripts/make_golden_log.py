"""Regenerate tests/data/golden_run.jsonl. Only run this when the log schema version changes."""

from pathlib import Path

from bite.actions import default_action_registry
from bite.attack import AttackRunConfig, run_attack
from bite.bandit import BanditConfig, LinUCB
from bite.context import Embedder, EmbedderSpec
from bite.judges import SyntheticJudge, SyntheticJudgeSpec, constant_quality
from bite.runlog import RunLogger

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "golden_run.jsonl"

judge = SyntheticJudge(SyntheticJudgeSpec({"emoji_count": 1.0}, constant_quality(5.0)), "golden")
embedder = Embedder(EmbedderSpec(d=8))
actions = default_action_registry()
bandit = LinUCB(BanditConfig([a.arm_id for a in actions], 8, 1.0, 0))
cfg = AttackRunConfig(T=4, K=3, seed=0)
meta = {"T": 4, "K": 3, "alpha": 1.0, "mode": "pointwise", "mapping": "three_way", "semantic_gate": 0.8,
        "reject_below_gate": False, "shared_bandit": False}
with RunLogger(OUT, "golden", "g01", "bite", 0, "golden", meta, bandit=bandit, question="What is six times seven?",
               reference=None, clock=lambda: "2026-01-01T00:00:00Z", bandit_state=True) as logger:
    result = run_attack(cfg, "What is six times seven?", "Six times seven is 42.", judge, embedder=embedder,
                        actions=actions, bandit=bandit, on_round=logger.on_round, on_start=logger.log_initial)
    logger.log_final(result, "pointwise")
print(OUT)
