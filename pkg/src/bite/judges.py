"""Judge abstraction: pointwise scores, pairwise verdicts and their numeric maps."""

from __future__ import annotations

import ast
import hashlib
import json
import logging
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .clients import HTTPClient, JudgeParseError
from .stylometry import FEATURE_NAMES, extract_features

log = logging.getLogger(__name__)

POINTWISE = "pointwise"
PAIRWISE = "pairwise"

THREE_WAY = {"win": 1.0, "tie": 0.0, "lose": -1.0}
FIVE_LEVEL = {"much_better": 2.0, "better": 1.0, "tie": 0.0, "worse": -1.0, "much_worse": -2.0}
MAPPINGS = {"three_way": THREE_WAY, "five_level": FIVE_LEVEL}

# remote labels, always read from the perspective of response A
_REMOTE_LABELS = {
    "a": "win", "b": "lose", "tie": "tie",
    "a>>b": "much_better", "a>b": "better", "a=b": "tie", "b>a": "worse", "b>>a": "much_worse",
}


def numeric_for(mode: str, raw, mapping: str = "three_way", scale: Tuple[int, int] = (1, 9)) -> float:
    if mode == POINTWISE:
        value = int(raw)
        if not scale[0] <= value <= scale[1]:
            raise ValueError(f"pointwise score {raw} outside {scale}")
        return float(value)
    table = MAPPINGS[mapping]
    if raw not in table:
        raise ValueError(f"label {raw!r} not in the {mapping} mapping")
    return table[raw]


def raw_for(mode: str, numeric: float, mapping: str = "three_way"):
    if mode == POINTWISE:
        return int(numeric)
    for label, value in MAPPINGS[mapping].items():
        if value == numeric:
            return label
    raise ValueError(f"{numeric} has no label in the {mapping} mapping")


@dataclass(frozen=True)
class JudgeVerdict:
    mode: str
    raw: object
    numeric: float
    feedback: Optional[str] = None
    mapping: str = "three_way"
    prompt_variant: Optional[int] = None


def _stable_unit(*parts: str) -> float:
    """Deterministic pseudo-random value in [0, 1) keyed on text."""
    h = hashlib.blake2b("\x1f".join(parts).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(h, "little") / 2.0 ** 64


def constant_quality(value: float) -> Callable[[str], float]:
    return lambda question: float(value)


def hashed_quality(low: float, high: float) -> Callable[[str], float]:
    """Per-question substance drawn uniformly from [low, high] by hashing the question."""
    return lambda question: low + (high - low) * _stable_unit("quality", question)


@dataclass
class SyntheticJudgeSpec:
    """Planted-bias judge.

    score = base_quality(question) + sum_j w_j f_j(answer)
            + nonlinearity_scale * h(answer) + noise,
    clamped to ``clamp`` and optionally rounded to an integer. ``h`` is a
    deterministic hash of the answer text in [-1, 1]: inflation that no
    registered style feature can explain.
    """

    planted_weights: Dict[str, float] = field(default_factory=dict)
    base_quality_fn: Callable[[str], float] = field(default_factory=lambda: constant_quality(5.0))
    nonlinearity_scale: float = 0.0
    noise_sigma: float = 0.0
    clamp: Tuple[float, float] = (1.0, 9.0)
    integer_scores: bool = True
    position_bonus: float = 0.0
    seed: int = 0

    def __post_init__(self):
        unknown = set(self.planted_weights) - set(FEATURE_NAMES)
        if unknown:
            raise ValueError(f"planted weights on unregistered features: {sorted(unknown)}")
        if self.noise_sigma < 0 or self.nonlinearity_scale < 0:
            raise ValueError("noise_sigma and nonlinearity_scale must be non-negative")
        if self.clamp[0] > self.clamp[1]:
            raise ValueError("clamp bounds are reversed")


class Judge:
    """Base class. ``compare`` gives the verdict for ``first`` against ``second``."""

    judge_id = "judge"
    mode = POINTWISE
    mapping = "three_way"

    def score(self, question: str, answer: str, prompt: Optional[str] = None) -> JudgeVerdict:
        raise NotImplementedError

    def compare(self, question: str, first: str, second: str, prompt: Optional[str] = None) -> JudgeVerdict:
        raise NotImplementedError


class SyntheticJudge(Judge):
    def __init__(self, spec: SyntheticJudgeSpec, judge_id: str = "synthetic", mode: str = POINTWISE,
                 mapping: str = "three_way", thresholds: Tuple[float, float] = (1.0, 3.0),
                 tie_margin: float = 0.0):
        if mapping not in MAPPINGS:
            raise ValueError(f"unknown mapping {mapping!r}")
        self.spec = spec
        self.judge_id = judge_id
        self.mode = mode
        self.mapping = mapping
        self.thresholds = thresholds
        self.tie_margin = tie_margin
        self.calls = 0
        self._rng = np.random.default_rng(spec.seed)

    def raw_score(self, question: str, answer: str) -> float:
        spec = self.spec
        value = spec.base_quality_fn(question)
        if spec.planted_weights:
            f = extract_features(answer)
            value += sum(w * f[name] for name, w in spec.planted_weights.items())
        if spec.nonlinearity_scale:
            value += spec.nonlinearity_scale * (2.0 * _stable_unit("style", answer) - 1.0)
        if spec.noise_sigma:
            value += float(self._rng.normal(0.0, spec.noise_sigma))
        if spec.integer_scores:
            value = float(math.floor(value + 0.5))
        return float(min(max(value, spec.clamp[0]), spec.clamp[1]))

    def score(self, question, answer, prompt=None):
        self.calls += 1
        value = self.raw_score(question, answer)
        raw = int(value) if self.spec.integer_scores else value
        return JudgeVerdict(POINTWISE, raw, value)

    def _label(self, gap: float) -> str:
        if self.mapping == "three_way":
            if abs(gap) <= self.tie_margin:
                return "tie"
            return "win" if gap > 0 else "lose"
        small, large = self.thresholds
        if gap >= large:
            return "much_better"
        if gap >= small:
            return "better"
        if gap > -small:
            return "tie"
        if gap > -large:
            return "worse"
        return "much_worse"

    def compare(self, question, first, second, prompt=None):
        self.calls += 1
        gap = self.raw_score(question, first) + self.spec.position_bonus - self.raw_score(question, second)
        label = self._label(gap)
        return JudgeVerdict(PAIRWISE, label, MAPPINGS[self.mapping][label], mapping=self.mapping)


def load_judge_prompt(name: str) -> str:
    return resources.files("bite.prompts").joinpath(f"{name}.txt").read_text(encoding="utf-8").rstrip("\n")


def _candidate_objects(text: str) -> List[dict]:
    text = text.replace("“", '"').replace("”", '"').replace("‘", "'").replace("’", "'")
    decoder = json.JSONDecoder()
    found = []
    for m in re.finditer(r"\{", text):
        try:
            obj, _ = decoder.raw_decode(text, m.start())
        except ValueError:
            end = text.find("}", m.start())
            try:
                obj = ast.literal_eval(text[m.start():end + 1]) if end > 0 else None
            except (ValueError, SyntaxError):
                obj = None
        if isinstance(obj, dict):
            found.append(obj)
    return found


def parse_pointwise_response(text: str, scale: Tuple[int, int] = (1, 9)) -> JudgeVerdict:
    """Score from the last well-formed ``{"feedback": ..., "score": ...}`` object."""
    for obj in reversed(_candidate_objects(text)):
        if "score" not in obj:
            continue
        m = re.search(r"-?\d+(?:\.\d+)?", str(obj["score"]))
        if not m:
            continue
        value = float(m.group(0))
        if value != int(value) or not scale[0] <= value <= scale[1]:
            continue
        return JudgeVerdict(POINTWISE, int(value), float(value), feedback=obj.get("feedback"))
    raise JudgeParseError(f"no parseable score in judge response: {text[:120]!r}")


def parse_pairwise_response(text: str, mapping: str = "three_way") -> JudgeVerdict:
    for obj in reversed(_candidate_objects(text)):
        label = _REMOTE_LABELS.get(str(obj.get("verdict", "")).strip().lower().replace(" ", ""))
        if label is None or label not in MAPPINGS[mapping]:
            continue
        return JudgeVerdict(PAIRWISE, label, MAPPINGS[mapping][label],
                            feedback=obj.get("feedback"), mapping=mapping)
    raise JudgeParseError(f"no parseable verdict in judge response: {text[:120]!r}")


class RemoteJudge(Judge):
    """LLM judge behind an OpenAI-compatible endpoint.

    Parse failures are retried up to ``parse_attempts`` times before raising
    :class:`JudgeParseError`.
    """

    def __init__(self, client: HTTPClient, judge_id: str = "remote", mode: str = POINTWISE,
                 mapping: str = "three_way", prompt: Optional[str] = None, parse_attempts: int = 3,
                 scale: Tuple[int, int] = (1, 9)):
        self.client = client
        self.judge_id = judge_id
        self.mode = mode
        self.mapping = mapping
        self.scale = scale
        self.parse_attempts = parse_attempts
        if prompt is None:
            if mode == POINTWISE:
                prompt = load_judge_prompt("judge_pointwise")
            else:
                prompt = load_judge_prompt("judge_pairwise" if mapping == "three_way" else "judge_pairwise_5level")
        self.prompt = prompt
        self.calls = 0

    def _ask(self, prompt: str, parse):
        last = None
        for _ in range(self.parse_attempts):
            self.calls += 1
            text = self.client.complete(prompt)
            try:
                return parse(text)
            except JudgeParseError as exc:
                last = exc
                log.warning("judge %s: %s", self.judge_id, exc)
        raise last

    def score(self, question, answer, prompt=None):
        filled = (prompt or self.prompt).replace("{INPUTS}", question).replace("{OUTPUT}", answer)
        return self._ask(filled, lambda t: parse_pointwise_response(t, self.scale))

    def compare(self, question, first, second, prompt=None):
        filled = ((prompt or self.prompt).replace("{INPUTS}", question)
                  .replace("{OUTPUT_A}", first).replace("{OUTPUT_B}", second))
        return self._ask(filled, lambda t: parse_pairwise_response(t, self.mapping))


def score_pointwise(judge: Judge, question: str, answer: str) -> JudgeVerdict:
    return judge.score(question, answer)


def score_pairwise(judge: Judge, question: str, target: str, reference: str) -> JudgeVerdict:
    return judge.compare(question, target, reference)


def score_pairwise_swapped(judge: Judge, question: str, target: str, reference: str) -> float:
    """Position-debiased preference of ``target`` over ``reference``.

    Both orientations must succeed; there is no single-orientation fallback.
    """
    forward = judge.compare(question, target, reference)
    backward = judge.compare(question, reference, target)
    return (forward.numeric - backward.numeric) / 2.0


@dataclass
class JudgePromptSet:
    variants: Sequence[str]
    selection_seed: int = 0
    required: Sequence[str] = ("{INPUTS}", "{OUTPUT}")

    def __post_init__(self):
        if not self.variants:
            raise ValueError("at least one prompt variant is required")
        for i, v in enumerate(self.variants):
            missing = [p for p in self.required if p not in v]
            if missing:
                raise ValueError(f"prompt variant {i} lacks placeholders {missing}")


def default_pointwise_variants() -> List[str]:
    return [load_judge_prompt(n) for n in ("judge_pointwise", "judge_pointwise_v2", "judge_pointwise_v3")]


class RandomizedPromptJudge(Judge):
    """Defense wrapper: each scoring call first draws one prompt variant uniformly."""

    def __init__(self, judge: Judge, prompts: JudgePromptSet):
        self.inner = judge
        self.prompts = prompts
        self.judge_id = f"{judge.judge_id}+randprompt"
        self.mode = judge.mode
        self.mapping = judge.mapping
        self._rng = np.random.default_rng(prompts.selection_seed)
        self.usage: List[int] = []

    def _draw(self) -> int:
        i = int(self._rng.integers(len(self.prompts.variants)))
        self.usage.append(i)
        log.debug("judge %s uses prompt variant %d", self.judge_id, i)
        return i

    def score(self, question, answer, prompt=None):
        i = self._draw()
        v = self.inner.score(question, answer, prompt=self.prompts.variants[i])
        return JudgeVerdict(v.mode, v.raw, v.numeric, v.feedback, v.mapping, prompt_variant=i)

    def compare(self, question, first, second, prompt=None):
        i = self._draw()
        v = self.inner.compare(question, first, second, prompt=self.prompts.variants[i])
        return JudgeVerdict(v.mode, v.raw, v.numeric, v.feedback, v.mapping, prompt_variant=i)
