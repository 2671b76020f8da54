"""Vulnerability fingerprints (OLS with t-test p-values) and transfer-ASR matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .attack import AttackResult, Scorer, is_success
from .judges import POINTWISE, Judge
from .reports import Table
from .stylometry import ALIASED_FEATURES, FEATURE_NAMES, extract_features, feature_delta

SIGNIFICANCE = 0.05


class DegenerateDesignError(ValueError):
    """The design matrix is rank deficient even after dropping constant and aliased columns."""

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        super().__init__(f"design matrix is rank deficient; offending columns: {', '.join(self.columns)}")


class InsufficientDataError(ValueError):
    """Too few observations for the requested fit."""


# Student t distribution via the regularized incomplete beta function.

def _betacf(a: float, b: float, x: float, max_iter: int = 300, eps: float = 1e-15) -> float:
    """Continued fraction for I_x(a, b), modified Lentz."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c, d = 1.0, 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, 1.0 - x) / b


def t_sf_two_sided(t: float, dof: float) -> float:
    """P(|T| >= |t|) for Student t with ``dof`` degrees of freedom."""
    if dof <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    p = betainc_reg(dof / 2.0, 0.5, dof / (dof + t * t))
    return min(max(p, 0.0), 1.0)


def t_cdf(t: float, dof: float) -> float:
    half = 0.5 * t_sf_two_sided(t, dof)
    return 1.0 - half if t >= 0 else half


# Ordinary least squares.

@dataclass
class OLSFit:
    names: List[str]
    beta: np.ndarray
    intercept: float
    se: np.ndarray
    intercept_se: float
    p_values: np.ndarray
    intercept_p: float
    r_squared: float
    dof: int
    n: int
    exact: bool


def screen_columns(X: np.ndarray, names: Sequence[str]) -> Tuple[List[int], Dict[str, str]]:
    """Indices of columns to keep, plus the reasons for dropping the rest."""
    dropped: Dict[str, str] = {}
    present = set(names)
    for alias, parts in ALIASED_FEATURES.items():
        if alias in present and all(p in present for p in parts):
            dropped[alias] = "alias of " + "+".join(parts)
    for j, name in enumerate(names):
        if name not in dropped and np.ptp(X[:, j]) == 0.0:
            dropped[name] = "zero variance"
    return [j for j, n in enumerate(names) if n not in dropped], dropped


def check_rank(D: np.ndarray, names: Sequence[str]):
    """Raise :class:`DegenerateDesignError` naming the columns a pivoted QR leaves dependent."""
    if D.shape[1] == 0:
        return
    _, R, piv = scipy.linalg.qr(D, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(D.shape) * np.finfo(float).eps * diag[0] * 1e3
    rank = int(np.sum(diag > tol))
    if rank < D.shape[1]:
        raise DegenerateDesignError([names[i] for i in sorted(piv[rank:])])


def ols(X: np.ndarray, y: np.ndarray, names: Sequence[str], intercept: bool = True) -> OLSFit:
    """Fit ``y ~ X`` by Householder QR. Columns must already be screened."""
    n, k = X.shape
    D = np.column_stack([np.ones(n), X]) if intercept else X
    labels = (["(intercept)"] if intercept else []) + list(names)
    check_rank(D, labels)
    p = D.shape[1]
    dof = n - p
    if dof < 1:
        raise InsufficientDataError(f"{n} observations cannot support {p} parameters")
    Q, R = np.linalg.qr(D)
    coef = scipy.linalg.solve_triangular(R, Q.T @ y)
    resid = y - D @ coef
    rss = float(resid @ resid)
    centered = y - y.mean() if intercept else y
    tss = float(centered @ centered)
    r2 = 1.0 - rss / tss if tss > 0 else 1.0

    y_scale = max(float(np.sqrt(np.mean(y * y))), 1e-300)
    exact = math.sqrt(rss / n) <= 1e-10 * max(1.0, y_scale)
    if exact:
        se = np.zeros(p)
        col_sd = np.concatenate([[1.0] if intercept else [], D[:, int(intercept):].std(axis=0)])
        contrib = np.abs(coef) * col_sd
        pv = np.where(contrib > 1e-9 * max(1.0, y_scale), 0.0, 1.0)
    else:
        Rinv = scipy.linalg.solve_triangular(R, np.eye(p))
        se = np.sqrt(rss / dof * np.sum(Rinv * Rinv, axis=1))
        pv = np.array([t_sf_two_sided(b / s, dof) if s > 0 else (0.0 if b else 1.0)
                       for b, s in zip(coef, se)])
    off = int(intercept)
    return OLSFit(list(names), coef[off:], float(coef[0]) if intercept else 0.0, se[off:],
                  float(se[0]) if intercept else 0.0, pv[off:], float(pv[0]) if intercept else 1.0,
                  r2, dof, n, exact)


# Fingerprints.

@dataclass
class FingerprintReport:
    judge_id: str
    feature_names: Tuple[str, ...]
    coefficients: np.ndarray
    intercept: float
    std_errors: np.ndarray
    p_values: np.ndarray
    mask: np.ndarray
    n_observations: int
    r_squared: float
    dropped: Dict[str, str] = field(default_factory=dict)
    dof: int = 0

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.feature_names.index(name)])

    def significant(self) -> List[str]:
        return [n for n, m in zip(self.feature_names, self.mask) if m]

    def to_table(self) -> Table:
        rows = [[n, float(b), float(s), float(p), bool(m), self.dropped.get(n)]
                for n, b, s, p, m in zip(self.feature_names, self.coefficients, self.std_errors,
                                         self.p_values, self.mask)]
        meta = {"judge_id": self.judge_id, "n_observations": self.n_observations,
                "r_squared": repr(self.r_squared), "intercept": repr(self.intercept), "dof": self.dof}
        return Table("fingerprint", ["feature", "coefficient", "std_error", "p_value", "significant",
                                     "dropped"], rows, meta)


def _design(records: Sequence[Tuple[float, Mapping[str, float]]], names: Sequence[str]):
    rows = sorted((float(ds), tuple(float(df[n]) for n in names)) for ds, df in records)
    y = np.array([r[0] for r in rows])
    X = np.array([r[1] for r in rows]).reshape(len(rows), len(names))
    return X, y


def fit_fingerprint(records: Sequence[Tuple[float, Mapping[str, float]]], judge_id: str = "judge",
                    feature_names: Sequence[str] = FEATURE_NAMES) -> FingerprintReport:
    """Regress score deltas on feature deltas.

    Records are canonically sorted first, so the report does not depend on
    their order. Dropped columns (aliases, zero variance) are reported with
    NaN coefficient and p-value 1.
    """
    names = tuple(feature_names)
    if len(records) <= len(names) + 1:
        raise InsufficientDataError(
            f"need more than {len(names) + 1} observations for {len(names)} features, got {len(records)}")
    X, y = _design(records, names)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("records contain non-finite values")
    keep, dropped = screen_columns(X, names)
    fit = ols(X[:, keep], y, [names[j] for j in keep])
    coef = np.full(len(names), np.nan)
    se = np.full(len(names), np.nan)
    pv = np.ones(len(names))
    coef[keep], se[keep], pv[keep] = fit.beta, fit.se, fit.p_values
    return FingerprintReport(judge_id, names, coef, fit.intercept, se, pv, pv < SIGNIFICANCE,
                             fit.n, fit.r_squared, dropped, fit.dof)


def records_from_result(result: AttackResult) -> List[Tuple[float, Dict[str, float]]]:
    """(score delta, feature delta) for every completed round of a run."""
    out = []
    feats = {}
    for tr in result.traces:
        if tr.skipped:
            continue
        child = result.candidates[tr.candidate_id]
        parent = result.candidates[tr.parent_id]
        for c in (child, parent):
            if c.id not in feats:
                feats[c.id] = extract_features(c.text)
        out.append((tr.reward, feature_delta(feats[parent.id], feats[child.id]).as_dict()))
    return out


# Transfer.

@dataclass(frozen=True)
class FinalAnswer:
    question: str
    a0: str
    final: str
    reference: Optional[str] = None


def successful_finals(results: Sequence[AttackResult], mode: str = POINTWISE,
                      references: Optional[Sequence[Optional[str]]] = None) -> List[FinalAnswer]:
    refs = references if references is not None else [None] * len(results)
    return [FinalAnswer(r.question, r.a0, r.best_final().text, ref)
            for r, ref in zip(results, refs) if is_success(r.s0, r.best_final().score, mode)]


def transfer_asr(source_finals: Sequence[FinalAnswer], target_judge: Judge,
                 mode: str = POINTWISE) -> Optional[float]:
    """Share of source-successful finals that also strictly beat their a0 on the target.

    Returns None for an empty input (an absent cell).
    """
    if not source_finals:
        return None
    hits = 0
    for fa in source_finals:
        score = Scorer(target_judge, fa.question, mode, fa.reference)
        s0, _ = score(fa.a0)
        s1, _ = score(fa.final)
        hits += is_success(s0, s1, mode)
    return hits / len(source_finals)


@dataclass
class TransferMatrix:
    judge_ids: Tuple[str, ...]
    values: List[List[Optional[float]]]
    n_source: Dict[str, int] = field(default_factory=dict)

    def cell(self, source: str, target: str) -> Optional[float]:
        return self.values[self.judge_ids.index(source)][self.judge_ids.index(target)]

    def as_array(self) -> np.ndarray:
        return np.array([[np.nan if v is None else v for v in row] for row in self.values])

    def to_table(self) -> Table:
        rows = [[src] + list(row) for src, row in zip(self.judge_ids, self.values)]
        return Table("transfer", ["source"] + list(self.judge_ids), rows,
                     {"n_source": ",".join(f"{k}:{v}" for k, v in self.n_source.items())})


def build_transfer_matrix(runs: Mapping[str, Sequence[AttackResult]], judges: Mapping[str, Judge],
                          mode: str = POINTWISE,
                          references: Optional[Mapping[str, Sequence[Optional[str]]]] = None) -> TransferMatrix:
    """Fill the source x target grid. The diagonal is 1.0 by construction.

    A source with no runs, or no successful runs, yields an absent row.
    """
    ids = tuple(judges)
    values: List[List[Optional[float]]] = []
    n_source: Dict[str, int] = {}
    for src in ids:
        results = runs.get(src)
        finals = successful_finals(results, mode, (references or {}).get(src)) if results else []
        n_source[src] = len(finals)
        row: List[Optional[float]] = []
        for tgt in ids:
            if not finals:
                row.append(None)
            elif tgt == src:
                row.append(1.0)
            else:
                row.append(transfer_asr(finals, judges[tgt], mode))
        values.append(row)
    return TransferMatrix(ids, values, n_source)
