import math

import numpy as np
import pytest

from bite.actions import RuleBasedEditor, actions_by_name, default_action_registry
from bite.analysis import InsufficientDataError
from bite.defense import (KERNEL, LINEAR, bias_stripped_score, evaluate_defense, fit_style_model, mean_style)
from bite.judges import hashed_quality
from bite.stylometry import FEATURE_NAMES, extract_features
from bite.synthetic import load_corpus, sample_edit_pairs

SUBSTANCE = hashed_quality(3.0, 6.0)


def synthetic_features(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        f = {name: float(rng.normal()) for name in FEATURE_NAMES}
        f["token_count"] = float(rng.uniform(0, 60))
        f["markdown_usage"] = f["bold_count"] + f["italic_count"]
        out.append(f)
    return out


@pytest.fixture(scope="module")
def planted_corpus():
    """Corpus answers and edited versions scored as substance + 2 * emoji_count."""
    corpus = load_corpus()
    a0s = [c["a0"] for c in corpus]
    feats, scores, groups, substance = [], [], [], []
    for i, parent, child in sample_edit_pairs(a0s, 400, seed=3):
        for text in (parent, child):
            f = extract_features(text)
            q = corpus[i]["question"]
            feats.append(f)
            substance.append(SUBSTANCE(q))
            scores.append(SUBSTANCE(q) + 2.0 * f["emoji_count"])
            groups.append(corpus[i]["question_id"])
    return feats, np.array(scores), groups, np.array(substance)


def test_linear_exact_recovery():
    feats = synthetic_features(40, 0)
    y = [0.5 * f["token_count"] + 3.0 for f in feats]
    m = fit_style_model(feats, y)
    assert m.weights[FEATURE_NAMES.index("token_count")] == pytest.approx(0.5, abs=1e-9)
    assert m.intercept == pytest.approx(3.0, abs=1e-9)
    others = np.delete(m.weights, FEATURE_NAMES.index("token_count"))
    assert np.max(np.abs(others)) < 1e-9


def test_constant_scores_give_zero_weights():
    feats = synthetic_features(30, 1)
    m = fit_style_model(feats, [4.5] * 30)
    assert np.max(np.abs(m.weights)) < 1e-12
    assert m.intercept == pytest.approx(4.5)


def test_kernel_beats_linear_on_nonlinear_corpus():
    feats = synthetic_features(150, 2)
    y = np.array([math.sin(f["token_count"] / 6.0) for f in feats])
    lin = fit_style_model(feats, y, LINEAR)
    ker = fit_style_model(feats, y, KERNEL)
    rmse = lambda m: float(np.sqrt(np.mean((m.predict_many(feats) - y) ** 2)))
    assert rmse(ker) < rmse(lin)
    assert ker.bandwidth > 0


def test_kernel_matches_linear_on_linear_corpus():
    feats = synthetic_features(240, 3)
    y = [1.0 + 0.2 * f["token_count"] - 0.7 * f["emoji_count"] for f in feats]
    lin = fit_style_model(feats, y, LINEAR)
    ker = fit_style_model(feats, y, KERNEL)
    held_out = synthetic_features(100, 4)
    for fs in (feats, held_out):
        assert np.max(np.abs(ker.predict_many(fs) - lin.predict_many(fs))) < 0.05


def test_minimum_sizes():
    with pytest.raises(InsufficientDataError):
        fit_style_model(synthetic_features(len(FEATURE_NAMES) + 1, 0), [1.0] * (len(FEATURE_NAMES) + 1))
    with pytest.raises(InsufficientDataError):
        fit_style_model(synthetic_features(9, 0), [1.0] * 9, KERNEL)
    with pytest.raises(ValueError):
        fit_style_model(synthetic_features(30, 0), [1.0] * 30, "forest")


def test_mean_features_leave_raw_unchanged():
    feats = synthetic_features(40, 5)
    m = fit_style_model(feats, [f["token_count"] * 0.1 + f["bold_count"] for f in feats])
    mu = mean_style(feats)
    centre = dict(zip(FEATURE_NAMES, mu))
    assert bias_stripped_score(m, centre, 6.25, mu) == pytest.approx(6.25, abs=1e-12)


def test_zero_weights_leave_raw_unchanged():
    feats = synthetic_features(30, 6)
    m = fit_style_model(feats, [2.0] * 30)
    mu = mean_style(feats)
    for f, raw in zip(feats, np.linspace(1, 9, 30)):
        assert bias_stripped_score(m, f, raw, mu) == pytest.approx(raw, abs=1e-9)


def test_planted_substance_recovered(planted_corpus):
    feats, scores, groups, substance = planted_corpus
    m = fit_style_model(feats, scores, groups=groups)
    assert m.weights[FEATURE_NAMES.index("emoji_count")] == pytest.approx(2.0, abs=1e-9)
    mu = mean_style(feats)
    stripped = np.array([bias_stripped_score(m, f, s, mu) for f, s in zip(feats, scores)])
    offset = stripped - substance
    # Centering leaves one shared constant: twice the corpus mean emoji count.
    assert np.max(np.abs(offset - 2.0 * mu[FEATURE_NAMES.index("emoji_count")])) < 1e-6


def test_idempotent_on_planted_corpus(planted_corpus):
    feats, scores, groups, _ = planted_corpus
    mu = mean_style(feats)
    m = fit_style_model(feats, scores, groups=groups)
    once = np.array([bias_stripped_score(m, f, s, mu) for f, s in zip(feats, scores)])
    m2 = fit_style_model(feats, once, groups=groups)
    twice = np.array([bias_stripped_score(m2, f, s, mu) for f, s in zip(feats, once)])
    assert np.max(np.abs(twice - once)) < 1e-6


def test_report_cells_and_gap_shrinks():
    corpus = load_corpus()
    acts = actions_by_name(default_action_registry())
    ed = RuleBasedEditor()
    second = ("emoji", "markdown", "verbosity", "authority", "sentiment", "bandwagon")
    base, attacked = [], []
    for i, c in enumerate(corpus):
        a1 = ed.edit(acts[second[i % len(second)]], ed.edit(acts["emoji"], c["a0"], i), i)
        for text, pop in ((c["a0"], base), (a1, attacked)):
            f = extract_features(text)
            pop.append((f, SUBSTANCE(c["question"]) + 1.5 * f["emoji_count"]))
    feats = [f for f, _ in base + attacked]
    scores = [s for _, s in base + attacked]
    groups = [c["question_id"] for c in corpus] * 2
    rep = evaluate_defense(attacked, base, fit_style_model(feats, scores, groups=groups))
    assert set(rep.cells) == {(p, s) for p in ("base", "attacked") for s in ("before", "after")}
    assert rep.gap("before") > 1.5
    assert abs(rep.gap("after")) <= abs(rep.gap("before"))
    assert abs(rep.gap("after")) < 1e-9
    sd = rep.cells[("base", "after")].sd
    assert abs(rep.mean("attacked", "after") - rep.mean("base", "after")) <= 2 * sd
    assert len(rep.to_table().rows) == 4


def test_empty_population_is_absent():
    feats = synthetic_features(30, 7)
    m = fit_style_model(feats, [f["bold_count"] for f in feats])
    rep = evaluate_defense([], [(f, 5.0) for f in feats], m)
    assert rep.cells[("attacked", "before")] is None
    assert rep.mean("attacked", "after") is None
    assert rep.gap("after") is None
    assert rep.mean("base", "before") == 5.0
