"""Style-control calibration: predict a judge's score from style features and subtract it."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .analysis import InsufficientDataError, ols, screen_columns
from .reports import Table
from .stylometry import FEATURE_NAMES

LINEAR = "linear"
KERNEL = "kernel"
KERNEL_RIDGE = 1e-6
KERNEL_MIN_N = 10


@dataclass
class StyleControlModel:
    """Fitted style predictor.

    The kernel variant is the linear fit plus a Gaussian kernel ridge
    correction learned on the linear residuals, so it falls back to the
    linear prediction far from the training data.
    """

    kind: str
    feature_names: Tuple[str, ...]
    weights: np.ndarray
    intercept: float
    dropped: Dict[str, str] = field(default_factory=dict)
    train_features: Optional[np.ndarray] = None
    residual_targets: Optional[np.ndarray] = None
    bandwidth: Optional[float] = None
    ridge: float = KERNEL_RIDGE
    center: Optional[np.ndarray] = None
    scale: Optional[np.ndarray] = None
    dual: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind == KERNEL and not (self.bandwidth and self.bandwidth > 0):
            raise ValueError("kernel bandwidth must be positive")

    def _matrix(self, features) -> np.ndarray:
        if isinstance(features, np.ndarray):
            X = np.atleast_2d(features).astype(float)
        else:
            X = np.array([[float(f[n]) for n in self.feature_names] for f in features])
        if X.shape[1] != len(self.feature_names):
            raise ValueError("feature vectors do not match the fitted registry")
        return X

    def _kernel(self, X: np.ndarray) -> np.ndarray:
        Z = (X - self.center) / self.scale
        T = (self.train_features - self.center) / self.scale
        sq = np.sum(Z ** 2, 1)[:, None] + np.sum(T ** 2, 1)[None, :] - 2 * Z @ T.T
        return np.exp(-np.maximum(sq, 0.0) / (2 * self.bandwidth ** 2))

    def predict_many(self, features) -> np.ndarray:
        X = self._matrix(features)
        out = self.intercept + X @ self.weights
        if self.kind == KERNEL:
            out = out + self._kernel(X) @ self.dual
        return out

    def predict(self, features) -> float:
        return float(self.predict_many([features] if not isinstance(features, np.ndarray) else features)[0])


def _as_matrix(features, names):
    return np.array([[float(f[n]) for n in names] for f in features]).reshape(len(features), len(names))


def _demean_by_group(M: np.ndarray, groups: Sequence) -> np.ndarray:
    out = M.astype(float).copy()
    labels = np.asarray([str(g) for g in groups])
    for g in np.unique(labels):
        idx = labels == g
        out[idx] -= out[idx].mean(axis=0)
    return out


def median_bandwidth(Z: np.ndarray) -> float:
    """Median pairwise Euclidean distance; 1.0 if all points coincide."""
    sq = np.sum(Z ** 2, 1)[:, None] + np.sum(Z ** 2, 1)[None, :] - 2 * Z @ Z.T
    iu = np.triu_indices(len(Z), 1)
    dist = np.sqrt(np.maximum(sq[iu], 0.0))
    dist = dist[dist > 0]
    return float(np.median(dist)) if dist.size else 1.0


def fit_style_model(features: Sequence[Mapping[str, float]], scores: Sequence[float], kind: str = LINEAR,
                    groups: Optional[Sequence] = None,
                    feature_names: Sequence[str] = FEATURE_NAMES) -> StyleControlModel:
    """Fit a style model on ``(features, score)`` pairs.

    With ``groups`` (e.g. question ids) the linear weights are estimated
    within groups, so per-group substance does not leak into the style
    weights; the intercept is then the pooled mean offset.
    """
    if kind not in (LINEAR, KERNEL):
        raise ValueError(f"unknown style model kind {kind!r}")
    names = tuple(feature_names)
    X = _as_matrix(features, names)
    y = np.asarray(scores, dtype=float)
    if len(y) != len(X):
        raise ValueError("features and scores differ in length")
    if kind == LINEAR and len(y) <= len(names) + 1:
        raise InsufficientDataError(f"linear style model needs more than {len(names) + 1} records")
    if kind == KERNEL and len(y) < KERNEL_MIN_N:
        raise InsufficientDataError(f"kernel style model needs at least {KERNEL_MIN_N} records")

    if groups is not None:
        if len(groups) != len(y):
            raise ValueError("groups and scores differ in length")
        Xw, yw = _demean_by_group(X, groups), _demean_by_group(y[:, None], groups)[:, 0]
    else:
        Xw, yw = X, y
    keep, dropped = screen_columns(Xw, names)
    weights = np.zeros(len(names))
    if keep:
        fit = ols(Xw[:, keep], yw, [names[j] for j in keep], intercept=groups is None)
        weights[keep] = fit.beta
    intercept = float(np.mean(y - X @ weights))
    model = StyleControlModel(LINEAR, names, weights, intercept, dropped)
    if kind == LINEAR:
        return model

    resid = yw - Xw @ weights - (np.mean(yw - Xw @ weights))
    center = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0] = 1.0
    Z = (X - center) / scale
    bw = median_bandwidth(Z)
    sq = np.sum(Z ** 2, 1)[:, None] + np.sum(Z ** 2, 1)[None, :] - 2 * Z @ Z.T
    G = np.exp(-np.maximum(sq, 0.0) / (2 * bw ** 2))
    dual = scipy.linalg.solve(G + KERNEL_RIDGE * np.eye(len(y)), resid, assume_a="pos")
    return StyleControlModel(KERNEL, names, weights, intercept, dropped, X, resid, bw, KERNEL_RIDGE,
                             center, scale, dual)


def mean_style(features: Sequence[Mapping[str, float]], feature_names: Sequence[str] = FEATURE_NAMES):
    """Component-wise mean feature vector, as an array in registry order."""
    return _as_matrix(features, tuple(feature_names)).mean(axis=0)


def bias_stripped_score(model: StyleControlModel, features, raw_score: float, corpus_mean_style) -> float:
    """Raw score minus the style contribution measured relative to the corpus mean style."""
    ref = corpus_mean_style if isinstance(corpus_mean_style, np.ndarray) else model._matrix([corpus_mean_style])
    return float(raw_score - (model.predict(features) - model.predict(np.atleast_2d(ref))))


@dataclass
class DefenseCell:
    mean: float
    sd: float
    n: int


@dataclass
class DefenseReport:
    """Mean and sd of raw ("before") and bias-stripped ("after") scores per population."""

    cells: Dict[Tuple[str, str], Optional[DefenseCell]]
    model_kind: str

    def mean(self, population: str, stage: str) -> Optional[float]:
        c = self.cells.get((population, stage))
        return None if c is None else c.mean

    def gap(self, stage: str) -> Optional[float]:
        a, b = self.mean("attacked", stage), self.mean("base", stage)
        return None if a is None or b is None else a - b

    def to_table(self) -> Table:
        rows = []
        for (pop, stage), c in self.cells.items():
            rows.append([pop, stage, None if c is None else c.mean, None if c is None else c.sd,
                         0 if c is None else c.n])
        return Table("defense", ["population", "stage", "mean", "sd", "n"], rows,
                     {"model": self.model_kind})


def _cell(values: List[float]) -> Optional[DefenseCell]:
    if not values:
        return None
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return DefenseCell(float(statistics.fmean(values)), float(sd), len(values))


def evaluate_defense(attacked_records: Sequence[Tuple[Mapping[str, float], float]],
                     base_records: Sequence[Tuple[Mapping[str, float], float]],
                     model: StyleControlModel, corpus_mean_style=None) -> DefenseReport:
    """Score both populations before and after stripping.

    ``corpus_mean_style`` defaults to the mean style over both populations.
    """
    everything = list(attacked_records) + list(base_records)
    if corpus_mean_style is None and everything:
        corpus_mean_style = mean_style([f for f, _ in everything], model.feature_names)
    cells: Dict[Tuple[str, str], Optional[DefenseCell]] = {}
    for pop, recs in (("base", base_records), ("attacked", attacked_records)):
        raw = [float(s) for _, s in recs]
        if recs:
            offset = model.predict_many([f for f, _ in recs]) - model.predict(np.atleast_2d(corpus_mean_style))
            after = [r - float(o) for r, o in zip(raw, offset)]
        else:
            after = []
        cells[(pop, "before")] = _cell(raw)
        cells[(pop, "after")] = _cell(after)
    return DefenseReport(cells, model.kind)
