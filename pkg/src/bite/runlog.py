"""Line-delimited JSON run logs and their exact replay.

A log file holds one run: an ``initial`` record (round 0, the unedited
answer), one ``round`` record per budgeted round, and a ``final`` record
carrying the full bandit state. Records are written with sorted keys and
``repr``-exact floats, so two runs with the same seeds produce identical
files apart from the ``timestamp`` field.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from .attack import AttackResult, Candidate, CandidatePool, RoundTrace, is_success
from .bandit import LinUCB
from .stylometry import REGISTRY_VERSION, extract_features

SCHEMA_VERSION = 1
INITIAL, ROUND, FINAL = "initial", "round", "final"


class LogFormatError(ValueError):
    """A log record is malformed or written by an unsupported schema version."""


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class RunLogRecord:
    schema_version: int
    kind: str
    run_id: str
    judge_id: str
    question_id: str
    dataset: str
    policy: str
    seed: int
    round: int
    chosen_action: Optional[str] = None
    parent_id: Optional[int] = None
    candidate_id: Optional[int] = None
    text_hash: Optional[str] = None
    text: Optional[str] = None
    raw_verdict: Any = None
    score: Optional[float] = None
    reward: Optional[float] = None
    features: Optional[Dict[str, float]] = None
    feature_registry: str = REGISTRY_VERSION
    bandit_snapshot_hash: Optional[str] = None
    ci_width: Optional[float] = None
    best_so_far: Optional[float] = None
    pool_mean: Optional[float] = None
    pool_ids: List[int] = field(default_factory=list)
    skipped: bool = False
    skip_reason: Optional[str] = None
    similarity: Optional[float] = None
    flagged: bool = False
    question: Optional[str] = None
    reference: Optional[str] = None
    config: Optional[Dict[str, Any]] = None
    summary: Optional[Dict[str, Any]] = None
    bandit_snapshot: Optional[List[dict]] = None
    timestamp: Optional[str] = None

    def to_json(self) -> str:
        data = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        return json.dumps(data, sort_keys=True, ensure_ascii=False, allow_nan=False)

    @classmethod
    def from_json(cls, line: str) -> "RunLogRecord":
        data = json.loads(line)
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise LogFormatError(f"unsupported log schema_version {version!r}")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise LogFormatError(f"unknown log fields: {sorted(unknown)}")
        return cls(**data)


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def log_name(judge_id: str, question_id: str, policy: str, seed: int) -> str:
    return f"{judge_id}__{question_id}__{policy}__s{seed}.jsonl"


class RunLogger:
    """Writes one run's records as they happen; pass :meth:`on_round` to ``run_attack``.

    The full bandit state (d x d design matrix per arm) goes into the final
    record only with ``bandit_state=True``; its hash is always logged.
    """

    def __init__(self, path: Union[str, Path], judge_id: str, question_id: str, policy: str, seed: int,
                 dataset: str = "", config: Optional[Dict[str, Any]] = None, hash_only: bool = False,
                 bandit: Optional[LinUCB] = None, question: Optional[str] = None,
                 reference: Optional[str] = None, clock=_now, bandit_state: bool = False):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("w", encoding="utf-8")
        self.base = dict(run_id=self.path.stem, judge_id=judge_id, question_id=question_id,
                         dataset=dataset, policy=policy, seed=seed)
        self.config = config or {}
        self.hash_only = hash_only
        self.question = None if hash_only else question
        self.reference = None if hash_only else reference
        self.bandit = bandit
        self.clock = clock
        self.bandit_state = bandit_state
        self.records = 0

    def _write(self, rec: RunLogRecord):
        self._fh.write(rec.to_json() + "\n")
        self._fh.flush()
        self.records += 1

    def _text_fields(self, text: str) -> Dict[str, Any]:
        return {"text_hash": text_hash(text), "text": None if self.hash_only else text,
                "features": extract_features(text).as_dict()}

    def log_initial(self, root: Candidate):
        self._write(RunLogRecord(SCHEMA_VERSION, INITIAL, round=0, candidate_id=root.id,
                                 raw_verdict=root.raw_verdict, score=root.score, best_so_far=root.score,
                                 pool_mean=root.score, pool_ids=[root.id], config=self.config,
                                 question=self.question, reference=self.reference,
                                 bandit_snapshot_hash=self.bandit.snapshot_hash() if self.bandit else None,
                                 timestamp=self.clock(), **self._text_fields(root.text), **self.base))

    def on_round(self, trace: RoundTrace, child: Optional[Candidate]):
        extra = self._text_fields(child.text) if child is not None else {}
        self._write(RunLogRecord(
            SCHEMA_VERSION, ROUND, round=trace.round, chosen_action=trace.chosen_arm,
            parent_id=trace.parent_id, candidate_id=trace.candidate_id,
            raw_verdict=child.raw_verdict if child is not None else None, score=trace.new_score,
            reward=trace.reward, ci_width=trace.ci_width_of_chosen, best_so_far=trace.best_so_far,
            pool_mean=trace.pool_mean, pool_ids=list(trace.pool_ids), skipped=trace.skipped,
            skip_reason=trace.skip_reason, similarity=trace.similarity, flagged=trace.flagged,
            bandit_snapshot_hash=self.bandit.snapshot_hash() if self.bandit else None,
            timestamp=self.clock(), **extra, **self.base))

    def log_final(self, result: AttackResult, mode: str):
        best = result.best_final()
        summary = {"s0": result.s0, "best_final": best.score, "best_id": best.id,
                   "success": is_success(result.s0, best.score, mode), "score_lift": best.score - result.s0,
                   "judge_calls": result.judge_calls, "mode": mode, "updates": result.updates}
        self._write(RunLogRecord(
            SCHEMA_VERSION, FINAL, round=len(result.traces) + 1, candidate_id=best.id, score=best.score,
            best_so_far=result.traces[-1].best_so_far if result.traces else result.s0,
            pool_mean=result.pool.mean_score(), pool_ids=result.pool.ids(), summary=summary,
            bandit_snapshot=result.bandit.snapshot() if result.bandit and self.bandit_state else None,
            bandit_snapshot_hash=result.bandit.snapshot_hash() if result.bandit else None,
            timestamp=self.clock(), **self.base))

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_log(path: Union[str, Path]) -> List[RunLogRecord]:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(RunLogRecord.from_json(line))
            except (ValueError, TypeError) as exc:
                raise LogFormatError(f"{path}:{lineno}: {exc}") from exc
    if not out or out[0].kind != INITIAL:
        raise LogFormatError(f"{path}: log does not start with an initial record")
    return out


def iter_logs(log_dir: Union[str, Path]) -> List[Tuple[Path, List[RunLogRecord]]]:
    paths = sorted(Path(log_dir).glob("*.jsonl"))
    return [(p, read_log(p)) for p in paths]


@dataclass
class ReplayedRun:
    run_id: str
    judge_id: str
    question_id: str
    dataset: str
    policy: str
    seed: int
    mode: str
    s0: float
    best_final: float
    best_id: int
    success: bool
    score_lift: float
    best_so_far: List[float]
    pool_mean: List[float]
    pool_ids: List[List[int]]
    mismatches: List[str]
    complete: bool


def replay(records: List[RunLogRecord]) -> ReplayedRun:
    """Rebuild the pool from logged scores and compare every derived value with the log."""
    init = records[0]
    cands = candidate_table(records)
    cfg = init.config or {}
    mode = cfg.get("mode", "pointwise")
    reject = bool(cfg.get("reject_below_gate", False))
    pool = CandidatePool(int(cfg.get("K", 3)), [Candidate(0, "", init.score)])
    best = init.score
    bsf, pmean, pids, mism = [init.score], [init.score], [[0]], []
    final = None
    for rec in records[1:]:
        if rec.kind == FINAL:
            final = rec
            break
        if not rec.skipped:
            c = Candidate(rec.candidate_id, "", rec.score, rec.parent_id, rec.chosen_action, rec.round,
                          flagged=rec.flagged)
            if not (rec.flagged and reject):
                pool.insert(c)
            best = max(best, rec.score)
            if rec.reward != rec.score - cands[rec.parent_id].score:
                mism.append(f"round {rec.round}: reward")
        if best != rec.best_so_far:
            mism.append(f"round {rec.round}: best_so_far {rec.best_so_far!r} != {best!r}")
        if pool.mean_score() != rec.pool_mean:
            mism.append(f"round {rec.round}: pool_mean {rec.pool_mean!r} != {pool.mean_score()!r}")
        if pool.ids() != rec.pool_ids:
            mism.append(f"round {rec.round}: pool_ids {rec.pool_ids} != {pool.ids()}")
        bsf.append(best)
        pmean.append(pool.mean_score())
        pids.append(pool.ids())
    top = min(pool.members, key=lambda c: (-c.score, c.id))
    success = is_success(init.score, top.score, mode)
    if final is not None:
        s = final.summary or {}
        for key, value in (("best_final", top.score), ("best_id", top.id), ("success", success),
                           ("score_lift", top.score - init.score), ("s0", init.score)):
            if s.get(key) != value:
                mism.append(f"final: {key} {s.get(key)!r} != {value!r}")
    return ReplayedRun(init.run_id, init.judge_id, init.question_id, init.dataset, init.policy, init.seed,
                       mode, init.score, top.score, top.id, success, top.score - init.score, bsf, pmean,
                       pids, mism, final is not None)


def candidate_table(records: Iterable[RunLogRecord]) -> Dict[int, RunLogRecord]:
    return {r.candidate_id: r for r in records if r.kind in (INITIAL, ROUND) and r.candidate_id is not None}
