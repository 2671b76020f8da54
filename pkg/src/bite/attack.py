"""The attack loop: candidate pool, round loop, baselines and run metrics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from .actions import RuleBasedEditor, StylisticAction, default_action_registry, rewrite_action
from .bandit import BanditConfig, LinUCB
from .clients import EditFailedError, JudgeParseError, RetryableError
from .context import Embedder
from .judges import PAIRWISE, POINTWISE, Judge

log = logging.getLogger(__name__)

POLICIES = ("bite", "random", "iterative-rewrite", "holistic-rewrite")
_SKIPPABLE = (EditFailedError, JudgeParseError, RetryableError)


class AttackAborted(RuntimeError):
    """The initial answer could not be scored; no rounds were run."""


@dataclass
class Candidate:
    id: int
    text: str
    score: float
    parent_id: Optional[int] = None
    action_applied: Optional[str] = None
    round_created: int = 0
    raw_verdict: object = None
    flagged: bool = False

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValueError("candidate score must be finite")
        if self.round_created == 0 and (self.parent_id is not None or self.action_applied is not None):
            raise ValueError("the round-0 candidate has no parent or action")


class CandidatePool:
    """Top-K elitist pool; members are kept in id order."""

    def __init__(self, capacity: int, members: Sequence[Candidate] = ()):
        if capacity < 1:
            raise ValueError("pool capacity must be positive")
        self.capacity = capacity
        self.members: List[Candidate] = sorted(members, key=lambda c: c.id)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def scores(self) -> List[float]:
        return [c.score for c in self.members]

    def max_score(self) -> float:
        return max(self.scores())

    def mean_score(self) -> float:
        s = self.scores()
        return sum(s) / len(s)

    def insert(self, c: Candidate) -> Optional[Candidate]:
        """Add ``c``; on overflow evict the lowest score (oldest round, then smallest id, on ties)."""
        self.members.append(c)
        self.members.sort(key=lambda m: m.id)
        evicted = None
        if len(self.members) > self.capacity:
            evicted = min(self.members, key=lambda m: (m.score, m.round_created, m.id))
            self.members.remove(evicted)
        return evicted

    def ids(self) -> List[int]:
        return [c.id for c in self.members]


def insert_and_truncate(pool: CandidatePool, c: Candidate) -> CandidatePool:
    pool.insert(c)
    return pool


@dataclass
class AttackRunConfig:
    T: int = 25
    K: int = 3
    policy: str = "bite"
    seed: int = 0
    alpha: float = 1.0
    mode: str = POINTWISE
    semantic_gate: float = 0.80
    reject_below_gate: bool = False

    def __post_init__(self):
        if self.T < 1 or self.K < 1:
            raise ValueError("T and K must be at least 1")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}; expected one of {POLICIES}")
        if self.mode not in (POINTWISE, PAIRWISE):
            raise ValueError(f"unknown judge mode {self.mode!r}")


@dataclass
class RoundTrace:
    round: int
    chosen_arm: Optional[str]
    parent_id: Optional[int]
    candidate_id: Optional[int]
    new_score: Optional[float]
    reward: Optional[float]
    best_so_far: float
    pool_mean: float
    ci_width_of_chosen: Optional[float]
    pool_ids: List[int] = field(default_factory=list)
    skipped: bool = False
    skip_reason: Optional[str] = None
    similarity: Optional[float] = None
    flagged: bool = False


@dataclass
class AttackResult:
    question: str
    a0: str
    s0: float
    policy: str
    seed: int
    traces: List[RoundTrace]
    pool: CandidatePool
    candidates: Dict[int, Candidate]
    judge_calls: int
    bandit: Optional[LinUCB] = None
    updates: Dict[str, int] = field(default_factory=dict)

    def best_final(self) -> Candidate:
        return min(self.pool.members, key=lambda c: (-c.score, c.id))


class Scorer:
    """Turns judge calls into the scalar S used for rewards; counts judge calls."""

    def __init__(self, judge: Judge, question: str, mode: str, reference: Optional[str]):
        if mode == PAIRWISE and reference is None:
            raise ValueError("pairwise attacks need a reference answer")
        self.judge, self.question, self.mode, self.reference = judge, question, mode, reference
        self.calls = 0

    def __call__(self, answer: str):
        if self.mode == POINTWISE:
            self.calls += 1
            v = self.judge.score(self.question, answer)
            return v.numeric, v.raw
        self.calls += 2
        fwd = self.judge.compare(self.question, answer, self.reference)
        bwd = self.judge.compare(self.question, self.reference, answer)
        return (fwd.numeric - bwd.numeric) / 2.0, [fwd.raw, bwd.raw]


def run_attack(cfg: AttackRunConfig, question: str, a0: str, judge: Judge, editor=None,
               embedder: Optional[Embedder] = None, actions: Optional[Sequence[StylisticAction]] = None,
               reference: Optional[str] = None, bandit: Optional[LinUCB] = None,
               on_round: Optional[Callable[[RoundTrace, Optional[Candidate]], None]] = None,
               on_start: Optional[Callable[[Candidate], None]] = None) -> AttackResult:
    """Run one attack on ``(question, a0)``.

    Each round picks a parent uniformly from the pool, embeds it, chooses an
    action per ``cfg.policy``, edits, scores, rewards the bandit with the
    parent-relative score change and inserts the child. Rounds whose edit or
    judgement fails still consume budget but update nothing. Passing a
    ``bandit`` shares its state across calls.
    """
    if not a0:
        raise ValueError("initial answer is empty")
    editor = editor or RuleBasedEditor()
    embedder = embedder or Embedder()
    actions = list(actions or default_action_registry())
    rewrite = rewrite_action()
    rng = np.random.default_rng(cfg.seed)
    score = Scorer(judge, question, cfg.mode, reference)

    if cfg.policy == "bite" and bandit is None:
        bandit = LinUCB(BanditConfig([a.arm_id for a in actions], embedder.d, cfg.alpha, cfg.seed))
    elif cfg.policy != "bite":
        bandit = None

    try:
        s0, raw0 = score(a0)
    except _SKIPPABLE as exc:
        raise AttackAborted(f"could not score the initial answer: {exc}") from exc
    root = Candidate(0, a0, s0, raw_verdict=raw0)
    if on_start:
        on_start(root)
    pool = CandidatePool(cfg.K, [root])
    candidates = {0: root}
    traces: List[RoundTrace] = []
    updates = {a.arm_id: 0 for a in actions}
    best = s0
    next_id = 1
    n_rounds = 1 if cfg.policy == "holistic-rewrite" else cfg.T

    for t in range(1, n_rounds + 1):
        if cfg.policy == "holistic-rewrite":
            parent = root
        else:
            parent = pool.members[int(rng.integers(len(pool)))]
        x = embedder.embed(question, parent.text)
        width = None
        if cfg.policy == "bite":
            arm = bandit.select(x)
            width = bandit.ci_width(arm, x)
            action = next(a for a in actions if a.arm_id == arm)
        elif cfg.policy == "random":
            action = actions[int(rng.integers(len(actions)))]
        else:
            action = rewrite
        edit_seed = int(rng.integers(2 ** 31))

        try:
            text = editor.edit(action, parent.text, edit_seed)
            s_t, raw_t = score(text)
        except _SKIPPABLE as exc:
            log.warning("round %d skipped: %s", t, exc)
            trace = RoundTrace(t, action.arm_id, parent.id, None, None, None, best, pool.mean_score(),
                               width, pool.ids(), skipped=True, skip_reason=type(exc).__name__)
            traces.append(trace)
            if on_round:
                on_round(trace, None)
            continue

        reward = s_t - parent.score
        if bandit is not None:
            bandit.update(action.arm_id, x, reward)
        if action.arm_id in updates:
            updates[action.arm_id] += 1

        sim = embedder.similarity(a0, text)
        flagged = sim < cfg.semantic_gate
        child = Candidate(next_id, text, s_t, parent.id, action.arm_id, t, raw_t, flagged)
        candidates[child.id] = child
        next_id += 1
        if not (flagged and cfg.reject_below_gate):
            pool.insert(child)
        best = max(best, s_t)
        trace = RoundTrace(t, action.arm_id, parent.id, child.id, s_t, reward, best, pool.mean_score(),
                           width, pool.ids(), similarity=sim, flagged=flagged)
        traces.append(trace)
        if on_round:
            on_round(trace, child)

    return AttackResult(question, a0, s0, cfg.policy, cfg.seed, traces, pool, candidates,
                        score.calls, bandit, updates)


@dataclass
class RunMetrics:
    s0: float
    best_final: float
    success: bool
    score_lift: float
    best_so_far: List[float]
    pool_mean: List[float]
    ci_width: List[Optional[float]]
    cumulative_reward: float


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def is_success(s0: float, final: float, mode: str = POINTWISE) -> bool:
    """Strict improvement (pointwise); the debiased verdict moving up a category (pairwise)."""
    if mode == POINTWISE:
        return final > s0
    return _sign(final) > _sign(s0)


def compute_run_metrics(result: AttackResult, mode: str = POINTWISE) -> RunMetrics:
    best_final = result.best_final().score
    return RunMetrics(
        s0=result.s0,
        best_final=best_final,
        success=is_success(result.s0, best_final, mode),
        score_lift=best_final - result.s0,
        best_so_far=[result.s0] + [t.best_so_far for t in result.traces],
        pool_mean=[result.s0] + [t.pool_mean for t in result.traces],
        ci_width=[t.ci_width_of_chosen for t in result.traces],
        cumulative_reward=sum(t.reward for t in result.traces if not t.skipped),
    )


def attack_success_rate(metrics: Sequence[RunMetrics]) -> float:
    return sum(m.success for m in metrics) / len(metrics)


def mean_score_lift(metrics: Sequence[RunMetrics]) -> float:
    return sum(m.score_lift for m in metrics) / len(metrics)


def unbeaten_rate(results_a: Sequence[AttackResult], results_b: Sequence[AttackResult],
                  judge: Optional[Judge] = None) -> float:
    """Share of paired runs where A's final answer wins or ties against B's.

    Without a judge the comparison uses the logged best scores; with a
    pairwise judge it uses the swap-averaged verdict.
    """
    if len(results_a) != len(results_b) or not results_a:
        raise ValueError("unbeaten rate needs equally many, non-zero paired runs")
    unbeaten = 0
    for a, b in zip(results_a, results_b):
        fa, fb = a.best_final(), b.best_final()
        if judge is None:
            unbeaten += fa.score >= fb.score
        else:
            fwd = judge.compare(a.question, fa.text, fb.text)
            bwd = judge.compare(a.question, fb.text, fa.text)
            unbeaten += (fwd.numeric - bwd.numeric) / 2.0 >= 0
    return unbeaten / len(results_a)


@dataclass
class GridItem:
    question_id: str
    question: str
    a0: str
    reference: Optional[str] = None


def run_baseline_grid(cfgs: Sequence[AttackRunConfig], items: Sequence[GridItem], judge: Judge,
                      editor=None, embedder: Optional[Embedder] = None,
                      actions: Optional[Sequence[StylisticAction]] = None) -> Dict[str, List]:
    """Run every config on every item with a shared judge.

    Failed runs are isolated: their slot holds the exception instead of a
    result and the grid carries on.
    """
    out: Dict[str, List] = {}
    for cfg in cfgs:
        runs = out.setdefault(cfg.policy, [])
        for item in items:
            try:
                runs.append(run_attack(cfg, item.question, item.a0, judge, editor, embedder,
                                       actions, item.reference))
            except Exception as exc:  # noqa: BLE001 - per-run isolation
                log.error("run %s/%s failed: %s", cfg.policy, item.question_id, exc)
                runs.append(exc)
    return out
