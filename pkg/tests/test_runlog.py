import json
from pathlib import Path

import pytest

from bite.attack import AttackRunConfig, compute_run_metrics, run_attack
from bite.bandit import ArmState
from bite.context import Embedder, EmbedderSpec
from bite.judges import SyntheticJudge, SyntheticJudgeSpec, constant_quality
from bite.runlog import (FINAL, INITIAL, ROUND, SCHEMA_VERSION, LogFormatError, RunLogger, RunLogRecord,
                         log_name, read_log, replay, text_hash)

GOLDEN = Path(__file__).parent / "data" / "golden_run.jsonl"


def judge():
    return SyntheticJudge(SyntheticJudgeSpec({"emoji_count": 0.5, "bold_count": 0.25}, constant_quality(5.0),
                                             integer_scores=False), "pj")


def logged_run(tmp_path, policy="bite", hash_only=False, T=10, seed=0):
    path = tmp_path / log_name("pj", "q1", policy, seed)
    cfg = AttackRunConfig(T=T, seed=seed, policy=policy)
    emb = Embedder(EmbedderSpec(d=32))
    with RunLogger(path, "pj", "q1", policy, seed, "unit", {"T": T, "K": 3, "mode": "pointwise"},
                   hash_only=hash_only, question="Q?", clock=lambda: "t") as lg:
        result = run_attack(cfg, "Q?", "An answer about tides and the moon.", judge(), embedder=emb,
                            on_round=lg.on_round, on_start=lg.log_initial)
        lg.log_final(result, "pointwise")
    return path, result


def test_golden_log_is_readable_and_replays():
    recs = read_log(GOLDEN)
    assert [r.kind for r in recs] == [INITIAL, ROUND, ROUND, ROUND, ROUND, FINAL]
    assert all(r.schema_version == SCHEMA_VERSION for r in recs)
    assert recs[0].text == "Six times seven is 42."
    assert recs[0].text_hash == text_hash("Six times seven is 42.")
    rp = replay(recs)
    assert rp.mismatches == [] and rp.complete
    assert rp.best_so_far == [5.0] * 5
    final = recs[-1]
    arms = [ArmState.from_record(a) for a in final.bandit_snapshot]
    assert sum(a.play_count for a in arms) == 4
    assert final.summary["judge_calls"] == 5


def test_golden_log_round_trips_byte_for_byte():
    for line in GOLDEN.read_text(encoding="utf-8").splitlines():
        assert RunLogRecord.from_json(line).to_json() == line


def test_log_layout_and_replay(tmp_path):
    path, result = logged_run(tmp_path)
    recs = read_log(path)
    assert recs[0].kind == INITIAL and recs[-1].kind == FINAL
    assert len(recs) == 12
    rp = replay(recs)
    assert rp.mismatches == []
    m = compute_run_metrics(result)
    assert rp.best_so_far == m.best_so_far
    assert rp.pool_mean == m.pool_mean
    assert rp.best_final == m.best_final and rp.success == m.success


def test_replay_detects_tampering(tmp_path):
    path, _ = logged_run(tmp_path)
    lines = path.read_text().splitlines()
    rec = json.loads(lines[3])
    rec["score"] += 1.0
    lines[3] = json.dumps(rec, sort_keys=True)
    path.write_text("\n".join(lines) + "\n")
    assert replay(read_log(path)).mismatches


def test_hash_only_omits_text(tmp_path):
    path, result = logged_run(tmp_path, hash_only=True)
    recs = read_log(path)
    assert all(r.text is None and r.question is None for r in recs)
    assert recs[0].text_hash == text_hash(result.a0)
    assert replay(recs).mismatches == []


def test_rewrite_policy_logs(tmp_path):
    path, _ = logged_run(tmp_path, policy="holistic-rewrite")
    recs = read_log(path)
    assert [r.kind for r in recs] == [INITIAL, ROUND, FINAL]
    assert recs[1].chosen_action == "rewrite"


def test_rejects_other_schema_versions(tmp_path):
    line = GOLDEN.read_text(encoding="utf-8").splitlines()[0]
    rec = json.loads(line)
    rec["schema_version"] = 99
    with pytest.raises(LogFormatError):
        RunLogRecord.from_json(json.dumps(rec))
    rec["schema_version"] = SCHEMA_VERSION
    rec["surprise"] = 1
    with pytest.raises(LogFormatError):
        RunLogRecord.from_json(json.dumps(rec))


def test_log_must_start_with_initial(tmp_path):
    lines = GOLDEN.read_text(encoding="utf-8").splitlines()
    p = tmp_path / "bad.jsonl"
    p.write_text("\n".join(lines[1:]) + "\n")
    with pytest.raises(LogFormatError):
        read_log(p)


def test_log_name():
    assert log_name("j", "q7", "bite", 3) == "j__q7__bite__s3.jsonl"
