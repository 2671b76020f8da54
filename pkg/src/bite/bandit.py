"""Disjoint-model LinUCB.

Each arm keeps a ridge design matrix ``A = I + sum x x^T`` and reward vector
``v = sum r x``. Parameter estimates are always re-solved from ``(A, v)``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np


class BanditError(ValueError):
    pass


class NumericError(ArithmeticError):
    pass


_NORM_SLACK = 1e-9


def as_context(values, d: Optional[int] = None, normalize: bool = False) -> np.ndarray:
    """Validate a context vector: finite entries, matching dimension, norm <= 1.

    With ``normalize=True`` vectors longer than one are rescaled onto the unit
    sphere instead of rejected.
    """
    x = np.asarray(values, dtype=float).reshape(-1)
    if d is not None and x.shape[0] != d:
        raise BanditError(f"context has dimension {x.shape[0]}, expected {d}")
    if not np.all(np.isfinite(x)):
        raise BanditError("context contains non-finite entries")
    norm = float(np.linalg.norm(x))
    if norm > 1.0 + _NORM_SLACK:
        if not normalize:
            raise BanditError(f"context norm {norm:.6g} exceeds 1")
        x = x / norm
    return x


@dataclass(frozen=True)
class BanditConfig:
    arm_ids: Sequence[str]
    d: int
    alpha: float = 1.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "arm_ids", tuple(self.arm_ids))
        if self.d < 1:
            raise BanditError("dimension d must be positive")
        if not self.alpha >= 0 or not math.isfinite(self.alpha):
            raise BanditError("alpha must be a finite non-negative number")
        if not self.arm_ids:
            raise BanditError("at least one arm is required")
        if len(set(self.arm_ids)) != len(self.arm_ids):
            raise BanditError("arm ids must be unique")


@dataclass
class ArmState:
    arm_id: str
    design_matrix: np.ndarray
    reward_vector: np.ndarray
    play_count: int = 0

    @property
    def d(self) -> int:
        return self.reward_vector.shape[0]

    @property
    def theta(self) -> np.ndarray:
        return _solve(self.design_matrix, self.reward_vector)

    def copy(self) -> "ArmState":
        return ArmState(self.arm_id, self.design_matrix.copy(), self.reward_vector.copy(), self.play_count)

    def to_record(self) -> dict:
        return {
            "arm_id": self.arm_id,
            "d": self.d,
            "design_matrix": self.design_matrix.reshape(-1).tolist(),
            "reward_vector": self.reward_vector.tolist(),
            "play_count": self.play_count,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "ArmState":
        d = int(rec["d"])
        A = np.asarray(rec["design_matrix"], dtype=float).reshape(d, d)
        return cls(rec["arm_id"], A, np.asarray(rec["reward_vector"], dtype=float), int(rec["play_count"]))


def _solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    L = np.linalg.cholesky(A)
    y = np.linalg.solve(L, b)
    return np.linalg.solve(L.T, y)


def _quad_inv(A: np.ndarray, x: np.ndarray) -> float:
    # x^T A^{-1} x = ||L^{-1} x||^2 with A = L L^T
    y = np.linalg.solve(np.linalg.cholesky(A), x)
    return float(y @ y)


def init_arms(config: BanditConfig) -> Dict[str, ArmState]:
    return {
        arm: ArmState(arm, np.eye(config.d), np.zeros(config.d), 0)
        for arm in config.arm_ids
    }


def ucb_score(arm: ArmState, x, alpha: float) -> float:
    x = as_context(x, arm.d)
    score = float(x @ arm.theta) + alpha * math.sqrt(_quad_inv(arm.design_matrix, x))
    if not math.isfinite(score):
        raise NumericError(f"non-finite UCB score for arm {arm.arm_id}")
    return score


def ci_width(arm: ArmState, x, alpha: float) -> float:
    x = as_context(x, arm.d)
    width = alpha * math.sqrt(_quad_inv(arm.design_matrix, x))
    if not math.isfinite(width):
        raise NumericError(f"non-finite CI width for arm {arm.arm_id}")
    return width


def select_arm(arms: Mapping[str, ArmState], x, alpha: float) -> str:
    """Arm with the largest UCB score; ties go to the earliest arm in map order."""
    if not arms:
        raise BanditError("cannot select from an empty arm map")
    best_id, best = None, -math.inf
    for arm_id, arm in arms.items():
        s = ucb_score(arm, x, alpha)
        if s > best:
            best_id, best = arm_id, s
    return best_id


def update_arm(arm: ArmState, x, reward: float) -> ArmState:
    x = as_context(x, arm.d)
    reward = float(reward)
    if not math.isfinite(reward):
        raise BanditError("reward must be finite")
    return ArmState(
        arm.arm_id,
        arm.design_matrix + np.outer(x, x),
        arm.reward_vector + reward * x,
        arm.play_count + 1,
    )


class LinUCB:
    """Stateful LinUCB agent over a fixed, ordered arm set.

    Inverses are recomputed from the design matrix after each update (never
    rank-one patched), so they cannot drift from ``A``. Scores for all arms
    are evaluated in one batched pass.
    """

    def __init__(self, config: BanditConfig):
        self.config = config
        self.arm_ids: List[str] = list(config.arm_ids)
        self._index = {a: i for i, a in enumerate(self.arm_ids)}
        k, d = len(self.arm_ids), config.d
        self._A = np.tile(np.eye(d), (k, 1, 1))
        self._v = np.zeros((k, d))
        self._Ainv = np.tile(np.eye(d), (k, 1, 1))
        self._counts = np.zeros(k, dtype=int)

    @property
    def alpha(self) -> float:
        return self.config.alpha

    @property
    def d(self) -> int:
        return self.config.d

    def _idx(self, arm_id: str) -> int:
        try:
            return self._index[arm_id]
        except KeyError:
            raise BanditError(f"unknown arm {arm_id!r}") from None

    def thetas(self) -> np.ndarray:
        return np.stack([_solve(self._A[i], self._v[i]) for i in range(len(self.arm_ids))])

    def scores(self, x, alpha: Optional[float] = None) -> np.ndarray:
        alpha = self.alpha if alpha is None else alpha
        x = as_context(x, self.d)
        theta = np.einsum("kij,kj->ki", self._Ainv, self._v)
        quad = np.einsum("i,kij,j->k", x, self._Ainv, x)
        s = theta @ x + alpha * np.sqrt(np.maximum(quad, 0.0))
        if not np.all(np.isfinite(s)):
            raise NumericError("non-finite UCB score")
        return s

    def select(self, x) -> str:
        # np.argmax returns the first maximum, i.e. the earliest arm id on ties
        return self.arm_ids[int(np.argmax(self.scores(x)))]

    def ci_width(self, arm_id: str, x) -> float:
        i = self._idx(arm_id)
        x = as_context(x, self.d)
        return self.alpha * math.sqrt(max(float(x @ self._Ainv[i] @ x), 0.0))

    def update(self, arm_id: str, x, reward: float) -> None:
        i = self._idx(arm_id)
        x = as_context(x, self.d)
        reward = float(reward)
        if not math.isfinite(reward):
            raise BanditError("reward must be finite")
        self._A[i] += np.outer(x, x)
        self._v[i] += reward * x
        self._Ainv[i] = np.linalg.inv(self._A[i])
        self._counts[i] += 1

    def arm_state(self, arm_id: str) -> ArmState:
        i = self._idx(arm_id)
        return ArmState(arm_id, self._A[i].copy(), self._v[i].copy(), int(self._counts[i]))

    def arm_states(self) -> Dict[str, ArmState]:
        return {a: self.arm_state(a) for a in self.arm_ids}

    def play_counts(self) -> Dict[str, int]:
        return {a: int(c) for a, c in zip(self.arm_ids, self._counts)}

    def snapshot(self) -> List[dict]:
        return [self.arm_state(a).to_record() for a in self.arm_ids]

    def snapshot_hash(self) -> str:
        h = hashlib.sha256()
        for i in range(len(self.arm_ids)):
            h.update(self._A[i].tobytes())
            h.update(self._v[i].tobytes())
        return h.hexdigest()[:16]
