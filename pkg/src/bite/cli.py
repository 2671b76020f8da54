"""Command-line entry point: ``bite attack | analyze | defend | regret | fingerprint``."""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import plotting
from .analysis import DegenerateDesignError, FinalAnswer, InsufficientDataError, fit_fingerprint, transfer_asr
from .attack import AttackAborted, AttackRunConfig, run_attack
from .actions import default_action_registry
from .bandit import BanditConfig, LinUCB
from .clients import ConfigError
from .config import build_editor, build_embedder, build_judge, check_credentials, load_config
from .defense import LINEAR, evaluate_defense, fit_style_model
from .regret import MisspecEnvSpec, sweep_and_report
from .reports import Table, write_table
from .runlog import FINAL, ROUND, RunLogger, candidate_table, iter_logs, log_name, replay
from .stylometry import FEATURE_NAMES

log = logging.getLogger("bite")

_QID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


class EmptyInputError(ValueError):
    """A report command found nothing to read."""


@dataclass
class DatasetItem:
    question_id: str
    question: str
    a0: str
    reference: Optional[str] = None


def load_dataset(path) -> Tuple[List[DatasetItem], List[Tuple[int, str]]]:
    """Parse a line-delimited dataset; bad lines are returned as (line number, reason)."""
    items, errors, seen = [], [], set()
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                if not isinstance(rec, dict):
                    raise ValueError("record is not an object")
                qid, question, a0 = rec["question_id"], rec["question"], rec["a0"]
                ref = rec.get("reference")
                if not all(isinstance(v, str) and v for v in (qid, question, a0)):
                    raise ValueError("question_id, question and a0 must be non-empty strings")
                if ref is not None and not isinstance(ref, str):
                    raise ValueError("reference must be a string")
                if not _QID_RE.match(qid) or "__" in qid:
                    raise ValueError(f"question_id {qid!r} must be [A-Za-z0-9._-] without '__'")
                if qid in seen:
                    raise ValueError(f"duplicate question_id {qid!r}")
            except (ValueError, KeyError) as exc:
                msg = f"missing key {exc}" if isinstance(exc, KeyError) else str(exc)
                errors.append((lineno, msg))
                continue
            seen.add(qid)
            items.append(DatasetItem(qid, question, a0, ref))
    return items, errors


# attack

def cmd_attack(config_path, dataset_path, out_dir) -> int:
    try:
        cfg = load_config(config_path)
        check_credentials(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    judges = [build_judge(j, cfg.rate_limits) for j in cfg.judges]
    editor = build_editor(cfg.editor, cfg.rate_limits)
    embedder = build_embedder(cfg.embedder, cfg.rate_limits)
    actions = default_action_registry()
    items, errors = load_dataset(dataset_path)
    for lineno, msg in errors:
        print(f"{dataset_path}:{lineno}: skipped malformed record: {msg}", file=sys.stderr)
    if not items:
        raise EmptyInputError(f"no valid records in {dataset_path}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = Path(dataset_path).stem
    failures = skipped = done = 0

    for judge in judges:
        for policy in cfg.policies:
            for seed in cfg.seeds:
                shared = None
                if policy == "bite" and cfg.shared_bandit:
                    shared = LinUCB(BanditConfig([a.arm_id for a in actions], embedder.d, cfg.alpha, seed))
                for item in items:
                    run_cfg = AttackRunConfig(cfg.T, cfg.K, policy, seed, cfg.alpha, judge.mode,
                                              cfg.semantic_gate, cfg.reject_below_gate)
                    bandit = shared
                    if policy == "bite" and bandit is None:
                        bandit = LinUCB(BanditConfig([a.arm_id for a in actions], embedder.d, cfg.alpha, seed))
                    path = out / log_name(judge.judge_id, item.question_id, policy, seed)
                    meta = {"T": cfg.T, "K": cfg.K, "alpha": cfg.alpha, "mode": judge.mode,
                            "mapping": judge.mapping, "semantic_gate": cfg.semantic_gate,
                            "reject_below_gate": cfg.reject_below_gate, "shared_bandit": cfg.shared_bandit}
                    logger = RunLogger(path, judge.judge_id, item.question_id, policy, seed, dataset, meta,
                                       cfg.hash_only, bandit, item.question, item.reference,
                                       bandit_state=cfg.log_bandit_state)
                    try:
                        result = run_attack(run_cfg, item.question, item.a0, judge, editor, embedder,
                                            actions, item.reference, bandit, logger.on_round,
                                            logger.log_initial)
                        logger.log_final(result, judge.mode)
                        done += 1
                    except AttackAborted as exc:
                        print(f"{path.name}: skipped: {exc}", file=sys.stderr)
                        skipped += 1
                        logger.close()
                        path.unlink()
                        continue
                    except Exception as exc:  # noqa: BLE001 - one failed run must not stop the grid
                        print(f"{path.name}: failed: {exc}", file=sys.stderr)
                        failures += 1
                        logger.close()
                        path.unlink()
                        continue
                    logger.close()
    print(f"attack: {done} runs written, {skipped} skipped, {failures} failed, "
          f"{len(errors)} malformed dataset lines -> {out}")
    return 0 if failures == 0 else 1


# shared log helpers

def _load_logs(log_dir):
    logs = iter_logs(log_dir) if Path(log_dir).is_dir() else []
    if not logs:
        raise EmptyInputError(f"no run logs (*.jsonl) found in {log_dir}")
    return logs


def fingerprint_records(records) -> List[Tuple[float, Dict[str, float]]]:
    cands = candidate_table(records)
    out = []
    for r in records:
        if r.kind == ROUND and not r.skipped:
            parent = cands[r.parent_id].features
            out.append((r.reward, {n: r.features[n] - parent[n] for n in FEATURE_NAMES}))
    return out


def _fingerprints(logs, per_dataset: bool):
    groups: Dict[Tuple[str, str], list] = defaultdict(list)
    for _, recs in logs:
        key = (recs[0].judge_id, recs[0].dataset if per_dataset else "")
        groups[key].extend(fingerprint_records(recs))
    reports, errors = {}, {}
    for key in sorted(groups):
        label = key[0] + (f"@{key[1]}" if per_dataset else "")
        try:
            reports[label] = fit_fingerprint(groups[key], label)
        except (DegenerateDesignError, InsufficientDataError) as exc:
            errors[label] = str(exc)
    return reports, errors


def _write_fingerprints(reports, errors, out: Path):
    for label, rep in reports.items():
        write_table(out / f"fingerprint_{label}.tsv", rep.to_table())
    for label, msg in errors.items():
        print(f"fingerprint {label}: {msg}", file=sys.stderr)
    if reports:
        labels = list(reports)
        values = np.array([reports[k].coefficients for k in labels])
        mask = np.array([reports[k].mask for k in labels])
        plotting.plot_heatmap(values, labels, list(FEATURE_NAMES), out / "fingerprint.png",
                              "style-feature coefficients (* p < 0.05)", mask=mask)


# analyze

def cmd_analyze(log_dir, out_dir, config_path=None, per_dataset: bool = False) -> int:
    logs = _load_logs(log_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    replays = [replay(recs) for _, recs in logs]

    rows = [[r.run_id, r.judge_id, r.question_id, r.policy, r.seed, r.s0, r.best_final, r.success,
             r.score_lift, len(r.mismatches)] for r in replays]
    write_table(out / "metrics.tsv", Table("metrics", ["run_id", "judge_id", "question_id", "policy", "seed",
                                                       "s0", "best_final", "success", "score_lift",
                                                       "replay_mismatches"], rows))
    by_cell: Dict[Tuple[str, str], list] = defaultdict(list)
    for r in replays:
        by_cell[(r.judge_id, r.policy)].append(r)
    asr_rows, curves = [], defaultdict(dict)
    for (judge, policy), runs in sorted(by_cell.items()):
        asr_rows.append([judge, policy, len(runs), sum(r.success for r in runs) / len(runs),
                         sum(r.score_lift for r in runs) / len(runs)])
        width = max(len(r.best_so_far) for r in runs)
        padded = [r.best_so_far + [r.best_so_far[-1]] * (width - len(r.best_so_far)) for r in runs]
        curves[judge][policy] = list(np.mean(padded, axis=0))
    write_table(out / "asr.tsv", Table("asr", ["judge_id", "policy", "n_runs", "asr", "mean_score_lift"],
                                       asr_rows))
    curve_rows = [[j, p, t, float(v)] for j in curves for p in curves[j] for t, v in enumerate(curves[j][p])]
    write_table(out / "curves.tsv", Table("curves", ["judge_id", "policy", "round", "mean_best_so_far"],
                                          curve_rows))
    plotting.plot_best_so_far(curves, out / "best_so_far.png")

    unbeaten_rows = []
    keyed = {(r.judge_id, r.policy, r.question_id, r.seed): r for r in replays}
    for judge in sorted({r.judge_id for r in replays}):
        for other in sorted({r.policy for r in replays if r.judge_id == judge} - {"bite"}):
            pairs = [(keyed[k], keyed.get((judge, other, k[2], k[3]))) for k in keyed
                     if k[0] == judge and k[1] == "bite"]
            pairs = [(a, b) for a, b in pairs if b is not None]
            if pairs:
                unbeaten_rows.append([judge, other, len(pairs),
                                      sum(a.best_final >= b.best_final for a, b in pairs) / len(pairs)])
    write_table(out / "unbeaten.tsv", Table("unbeaten", ["judge_id", "baseline", "n_pairs",
                                                         "bite_unbeaten_rate"], unbeaten_rows))

    _write_fingerprints(*_fingerprints(logs, per_dataset), out)

    if config_path is not None:
        _transfer(logs, replays, load_config(config_path), out)

    mismatches = sum(len(r.mismatches) for r in replays)
    if mismatches:
        for r in replays:
            for m in r.mismatches:
                print(f"{r.run_id}: replay mismatch: {m}", file=sys.stderr)
    print(f"analyze: {len(replays)} runs, {mismatches} replay mismatches -> {out}")
    return 0 if mismatches == 0 else 3


def _transfer(logs, replays, cfg, out: Path):
    judges = {j["id"]: build_judge(j, cfg.rate_limits) for j in cfg.judges}
    # Keep only the sources' bite runs that succeeded.
    finals: Dict[str, List[FinalAnswer]] = defaultdict(list)
    for (_, recs), rp in zip(logs, replays):
        if rp.policy != "bite" or not rp.success:
            continue
        init = recs[0]
        best = candidate_table(recs)[rp.best_id]
        if init.question is None or init.text is None or best.text is None:
            continue
        finals[rp.judge_id].append(FinalAnswer(init.question, init.text, best.text, init.reference))
    ids = list(judges)
    rows = []
    for src in ids:
        row = [src]
        for tgt in ids:
            if not finals.get(src):
                row.append(None)
            elif tgt == src:
                row.append(1.0)
            else:
                row.append(transfer_asr(finals[src], judges[tgt], judges[tgt].mode))
        rows.append(row)
    write_table(out / "transfer.tsv", Table("transfer", ["source"] + ids, rows,
                                            {"n_source": ",".join(f"{k}:{len(finals.get(k, []))}" for k in ids)}))
    values = np.array([[np.nan if v is None else v for v in r[1:]] for r in rows])
    plotting.plot_heatmap(values, ids, ids, out / "transfer.png", "transfer ASR (source rows)", cmap="viridis")


# defend

def defense_populations(logs, judge_id: str, attacked_policy: str = "bite"):
    """(all candidates, base records, attacked finals) for one judge, as (features, score, question_id)."""
    pooled, base, attacked = [], [], []
    for _, recs in logs:
        init = recs[0]
        if init.judge_id != judge_id:
            continue
        cands = candidate_table(recs)
        pooled += [(r.features, r.score, init.question_id) for r in cands.values()]
        if init.policy == attacked_policy:
            final = next(r for r in recs if r.kind == FINAL)
            best = cands[final.candidate_id]
            base.append((init.features, init.score, init.question_id))
            attacked.append((best.features, best.score, init.question_id))
    return pooled, base, attacked


def cmd_defend(log_dir, out_dir, kind: str = LINEAR, train_on: str = "pooled",
               attacked_policy: str = "bite") -> int:
    logs = _load_logs(log_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    bars, status = {}, 0
    for judge in sorted({recs[0].judge_id for _, recs in logs}):
        pooled, base, attacked = defense_populations(logs, judge, attacked_policy)
        train = {"pooled": pooled, "base": base, "attacked": attacked}[train_on]
        try:
            model = fit_style_model([f for f, _, _ in train], [s for _, s, _ in train], kind,
                                    groups=[q for _, _, q in train] if kind == LINEAR else None)
        except (DegenerateDesignError, InsufficientDataError) as exc:
            print(f"defend {judge}: {exc}", file=sys.stderr)
            status = 1
            continue
        rep = evaluate_defense([(f, s) for f, s, _ in attacked], [(f, s) for f, s, _ in base], model)
        table = rep.to_table()
        table.meta.update({"judge_id": judge, "train_on": train_on, "attacked_policy": attacked_policy})
        write_table(out / f"defense_{judge}.tsv", table)
        bars[judge] = {f"{p}/{s}": rep.mean(p, s) for p in ("base", "attacked") for s in ("before", "after")}
    if bars:
        plotting.plot_defense_bars(bars, out / "defense.png")
    print(f"defend: {len(bars)} judges -> {out}")
    return status


# regret

def cmd_regret(grid_path, out_dir) -> int:
    grid = yaml.safe_load(Path(grid_path).read_text(encoding="utf-8")) or {}
    base = {k: grid[k] for k in ("d", "K", "R", "S", "L", "delta") if k in grid}
    horizons = grid.get("T", [1024])
    horizons = horizons if isinstance(horizons, list) else [horizons]
    zetas = grid.get("zeta", [0.0])
    zetas = zetas if isinstance(zetas, list) else [zetas]
    seeds = grid.get("seeds", 20)
    seeds = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    specs = [MisspecEnvSpec(T=int(T), zeta=float(z), **base) for T in horizons for z in zetas]
    report = sweep_and_report(specs, seeds)
    out = Path(out_dir)
    write_table(out / "regret.tsv", report.to_table(every=int(grid.get("every", 1))))
    write_table(out / "regret_summary.tsv", report.summary_table())
    plotting.plot_regret({c.label: c.mean_curve() for c in report.cells if c.traces},
                         {c.label: c.sd_curve() for c in report.cells if c.traces}, out / "regret.png")
    failed = sum(len(c.failures) for c in report.cells)
    print(f"regret: {len(report.cells)} cells x {len(seeds)} seeds, {failed} failures -> {out}")
    return 0 if failed == 0 else 1


# fingerprint

def cmd_fingerprint(log_dir, out_dir, per_dataset: bool = False) -> int:
    logs = _load_logs(log_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports, errors = _fingerprints(logs, per_dataset)
    _write_fingerprints(reports, errors, out)
    for label, rep in reports.items():
        print(f"{label}: n={rep.n_observations} R2={rep.r_squared:.3f} significant={rep.significant()}")
    return 0 if not errors else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bite", description="Bandit-guided style attacks on LLM judges.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("attack", help="run attacks and write one log per (judge, question, policy, seed)")
    a.add_argument("--config", required=True)
    a.add_argument("--dataset", required=True)
    a.add_argument("--out", required=True, help="log directory")

    an = sub.add_parser("analyze", help="metrics, fingerprints and transfer from logs")
    an.add_argument("logs")
    an.add_argument("--out", required=True)
    an.add_argument("--config", help="experiment config; needed to rebuild judges for the transfer matrix")
    an.add_argument("--per-dataset", action="store_true")

    d = sub.add_parser("defend", help="style-control defense report from logs")
    d.add_argument("logs")
    d.add_argument("--out", required=True)
    d.add_argument("--model", choices=("linear", "kernel"), default="linear")
    d.add_argument("--train-on", choices=("pooled", "base", "attacked"), default="pooled")
    d.add_argument("--attacked-policy", default="bite")

    r = sub.add_parser("regret", help="misspecified-bandit regret sweep")
    r.add_argument("grid")
    r.add_argument("--out", required=True)

    f = sub.add_parser("fingerprint", help="fingerprint regressions only")
    f.add_argument("logs")
    f.add_argument("--out", required=True)
    f.add_argument("--per-dataset", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "attack":
            return cmd_attack(args.config, args.dataset, args.out)
        if args.command == "analyze":
            return cmd_analyze(args.logs, args.out, args.config, args.per_dataset)
        if args.command == "defend":
            return cmd_defend(args.logs, args.out, args.model, args.train_on, args.attacked_policy)
        if args.command == "regret":
            return cmd_regret(args.grid, args.out)
        return cmd_fingerprint(args.logs, args.out, args.per_dataset)
    except (EmptyInputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
