"""Misspecified linear bandit environments for checking LinUCB regret behaviour."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from .bandit import BanditConfig, LinUCB
from .reports import Table

log = logging.getLogger(__name__)

MISSPEC_FREQUENCY = 3.0


def compute_alpha(R: float, S: float, L: float, d: int, K: int, T: int, delta: float, zeta: float) -> float:
    """Confidence multiplier for LinUCB under misspecification level ``zeta`` (natural log)."""
    if R < 0 or S < 0 or zeta < 0:
        raise ValueError("R, S and zeta must be non-negative")
    if not 0 < L <= 1:
        raise ValueError("L must lie in (0, 1]")
    if d < 1 or K < 1 or T < 1:
        raise ValueError("d, K and T must be positive integers")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    log_term = math.log(1 + T * L * L)
    return (R * math.sqrt(d * K * log_term + 2 * math.log(1 / delta)) + S
            + math.sqrt(T) * zeta * math.sqrt(2 * d * K * log_term))


def regret_bound(alpha: float, d: int, K: int, T: int, L: float = 1.0) -> float:
    """High-probability cumulative regret bound 2*alpha*sqrt(2dKT log(1+TL^2))."""
    return 2 * alpha * math.sqrt(2 * d * K * T * math.log(1 + T * L * L))


@dataclass
class MisspecEnvSpec:
    """Planted K-arm linear environment with a bounded arm-dependent sinusoidal misspecification.

    Rewards are ``<x, theta_b> + eta + zeta * sin(w <x, u_b> + phi_b)`` with
    Gaussian noise of sd ``R``; the sinusoid's amplitude is ``zeta``, so its
    RMS over any trace is at most ``zeta``. Thetas are drawn from ``seed``
    unless ``true_thetas`` is given.
    """

    d: int = 4
    K: int = 4
    T: int = 1024
    R: float = 0.1
    S: float = 1.0
    L: float = 1.0
    zeta: float = 0.0
    delta: float = 0.1
    seed: int = 0
    true_thetas: Optional[np.ndarray] = None

    def __post_init__(self):
        if not 0 < self.L <= 1:
            raise ValueError("L must lie in (0, 1]")
        if self.d < 1 or self.K < 1 or self.T < 1:
            raise ValueError("d, K and T must be positive")
        if self.R < 0 or self.zeta < 0 or self.S < 0:
            raise ValueError("R, S and zeta must be non-negative")
        rng = np.random.default_rng([self.seed, 7])
        dirs = rng.normal(size=(self.K, self.d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        drawn = dirs * self.S * rng.uniform(0.5, 1.0, size=(self.K, 1))
        self.thetas = drawn if self.true_thetas is None else np.asarray(self.true_thetas, dtype=float)
        if self.thetas.shape != (self.K, self.d):
            raise ValueError("true_thetas must have shape (K, d)")
        if np.any(np.linalg.norm(self.thetas, axis=1) > self.S + 1e-12):
            raise ValueError("every theta must satisfy ||theta|| <= S")
        u = rng.normal(size=(self.K, self.d))
        self.misspec_dirs = u / np.linalg.norm(u, axis=1, keepdims=True)
        self.misspec_phase = rng.uniform(0, 2 * np.pi, size=self.K)

    def alpha(self) -> float:
        return compute_alpha(self.R, self.S, self.L, self.d, self.K, self.T, self.delta, self.zeta)

    def misspec(self, x: np.ndarray) -> np.ndarray:
        """Misspecification term for every arm at context ``x``."""
        return self.zeta * np.sin(MISSPEC_FREQUENCY * (self.misspec_dirs @ x) + self.misspec_phase)

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform in the radius-L ball."""
        g = rng.normal(size=self.d)
        return self.L * rng.uniform() ** (1.0 / self.d) * g / np.linalg.norm(g)


@dataclass
class RegretTrace:
    instantaneous: np.ndarray
    cumulative: np.ndarray
    chosen: List[int]
    misspec_rms: float
    alpha: float

    @property
    def final(self) -> float:
        return float(self.cumulative[-1])


def run_regret_experiment(env: MisspecEnvSpec, alpha: Optional[float] = None) -> RegretTrace:
    """Run LinUCB for ``env.T`` rounds; regret is measured against the planted linear best arm."""
    alpha = env.alpha() if alpha is None else alpha
    arms = [str(b) for b in range(env.K)]
    bandit = LinUCB(BanditConfig(arms, env.d, alpha, env.seed))
    # Contexts and noise come from one stream, fixed per seed, so zeta sweeps share them.
    rng = np.random.default_rng([env.seed, 11])
    inst = np.empty(env.T)
    chosen: List[int] = []
    m_sq = 0.0
    for t in range(env.T):
        x = env.sample_context(rng)
        noise = rng.normal(0.0, env.R) if env.R else 0.0
        means = env.thetas @ x
        b = arms.index(bandit.select(x))
        m = float(env.misspec(x)[b])
        m_sq += m * m
        bandit.update(arms[b], x, float(means[b] + noise + m))
        inst[t] = max(0.0, float(means.max() - means[b]))
        chosen.append(b)
    return RegretTrace(inst, np.cumsum(inst), chosen, math.sqrt(m_sq / env.T), alpha)


@dataclass
class RegretCell:
    label: str
    spec: MisspecEnvSpec
    alpha: float
    traces: List[RegretTrace] = field(default_factory=list)
    failures: Dict[int, str] = field(default_factory=dict)

    def mean_curve(self) -> np.ndarray:
        return np.mean([t.cumulative for t in self.traces], axis=0)

    def sd_curve(self) -> np.ndarray:
        return np.std([t.cumulative for t in self.traces], axis=0)

    def final_quartile_slope(self) -> float:
        """Mean per-round regret over the last quarter of the horizon."""
        mean = self.mean_curve()
        T = len(mean)
        start = (3 * T) // 4
        return float((mean[-1] - mean[start - 1]) / (T - start))


@dataclass
class RegretReport:
    cells: List[RegretCell]

    def to_table(self, every: int = 1) -> Table:
        rows = []
        for cell in self.cells:
            if not cell.traces:
                continue
            mean, sd = cell.mean_curve(), cell.sd_curve()
            for t in range(every - 1, len(mean), every):
                rows.append([cell.label, t + 1, float(mean[t]), float(sd[t]), len(cell.traces)])
        meta = {f"alpha[{c.label}]": repr(c.alpha) for c in self.cells}
        meta.update({f"failures[{c.label}]": str(len(c.failures)) for c in self.cells})
        return Table("regret", ["cell", "round", "mean_cumulative_regret", "sd", "n_traces"], rows, meta)

    def summary_table(self) -> Table:
        rows = [[c.label, c.spec.zeta, c.spec.T, c.alpha, len(c.traces), len(c.failures),
                 float(c.mean_curve()[-1]) if c.traces else None,
                 c.final_quartile_slope() if c.traces else None] for c in self.cells]
        return Table("regret-summary", ["cell", "zeta", "T", "alpha", "n_traces", "n_failures",
                                        "mean_final_regret", "final_quartile_slope"], rows)


def sweep_and_report(grid: Sequence[MisspecEnvSpec], seeds: Sequence[int],
                     labels: Optional[Sequence[str]] = None) -> RegretReport:
    """Run each spec over ``seeds``.

    Each seed draws its own environment unless the spec pins ``true_thetas``;
    specs differing only in ``zeta`` see identical thetas, contexts and noise.
    """
    labels = list(labels) if labels is not None else [f"zeta={s.zeta:g},T={s.T}" for s in grid]
    cells = []
    for label, spec in zip(labels, grid):
        cell = RegretCell(label, spec, spec.alpha())
        for seed in seeds:
            env = replace(spec, seed=seed)
            try:
                cell.traces.append(run_regret_experiment(env, cell.alpha))
            except Exception as exc:  # noqa: BLE001 - per-cell failure isolation
                log.error("regret cell %s seed %d failed: %s", label, seed, exc)
                cell.failures[seed] = repr(exc)
        cells.append(cell)
    return RegretReport(cells)
