"""Declarative experiment configuration (YAML or JSON) and the objects it builds."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import yaml

from .actions import LLMEditor, RuleBasedEditor
from .attack import POLICIES
from .clients import ConfigError, EndpointConfig, HTTPClient
from .context import Embedder, EmbedderSpec
from .judges import (MAPPINGS, PAIRWISE, POINTWISE, Judge, RemoteJudge, SyntheticJudge, SyntheticJudgeSpec,
                     constant_quality, hashed_quality)

KNOWN_KEYS = {"judges", "editor", "embedder", "policies", "T", "K", "alpha", "seeds", "rate_limits",
              "hash_only", "shared_bandit", "semantic_gate", "reject_below_gate", "log_bandit_state"}


@dataclass
class ExperimentConfig:
    judges: List[Dict[str, Any]]
    editor: Dict[str, Any] = field(default_factory=lambda: {"kind": "rule-based"})
    embedder: Dict[str, Any] = field(default_factory=lambda: {"kind": "offline-hashing", "d": 256})
    policies: List[str] = field(default_factory=lambda: list(POLICIES))
    T: int = 25
    K: int = 3
    alpha: float = 1.0
    seeds: List[int] = field(default_factory=lambda: [0])
    rate_limits: Dict[str, Any] = field(default_factory=dict)
    hash_only: bool = False
    shared_bandit: bool = False
    semantic_gate: float = 0.80
    reject_below_gate: bool = False
    log_bandit_state: bool = False

    def judge_ids(self) -> List[str]:
        return [j["id"] for j in self.judges]


def load_config(source: Union[str, Path, Mapping[str, Any]]) -> ExperimentConfig:
    """Parse and validate a config file (``.yaml``, ``.yml`` or ``.json``) or mapping."""
    if isinstance(source, Mapping):
        data = dict(source)
    else:
        text = Path(source).read_text(encoding="utf-8")
        data = json.loads(text) if str(source).endswith(".json") else yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if not data.get("judges"):
        raise ConfigError("config needs at least one judge")
    cfg = ExperimentConfig(**data)
    ids = cfg.judge_ids() if all("id" in j for j in cfg.judges) else None
    if ids is None or len(set(ids)) != len(ids):
        raise ConfigError("every judge needs a unique id")
    if any("__" in i for i in ids):
        raise ConfigError("judge ids must not contain '__'")
    bad = set(cfg.policies) - set(POLICIES)
    if bad:
        raise ConfigError(f"unknown policies: {sorted(bad)}")
    if cfg.T < 1 or cfg.K < 1:
        raise ConfigError("T and K must be at least 1")
    for j in cfg.judges:
        if j.get("kind", "synthetic") not in ("synthetic", "remote"):
            raise ConfigError(f"judge {j['id']}: unknown kind {j.get('kind')!r}")
        if j.get("mode", POINTWISE) not in (POINTWISE, PAIRWISE):
            raise ConfigError(f"judge {j['id']}: unknown mode {j.get('mode')!r}")
        if j.get("mapping", "three_way") not in MAPPINGS:
            raise ConfigError(f"judge {j['id']}: unknown mapping {j.get('mapping')!r}")
    return cfg


def _endpoint(section: Mapping[str, Any], rate_limits: Mapping[str, Any]) -> EndpointConfig:
    for key in ("base_url", "model"):
        if key not in section:
            raise ConfigError(f"remote endpoint is missing {key!r}")
    if "api_key" in section:
        raise ConfigError("credentials must come from an environment variable (api_key_env), not the config")
    return EndpointConfig(
        base_url=section["base_url"], model=section["model"], api_key_env=section.get("api_key_env"),
        timeout=float(section.get("timeout", 60.0)), max_attempts=int(section.get("max_attempts", 3)),
        max_in_flight=int(rate_limits.get("max_in_flight", 4)),
        requests_per_second=rate_limits.get("requests_per_second"))


def check_credentials(cfg: ExperimentConfig):
    """Fail before any run if a remote component's key variable is unset."""
    sections = [j for j in cfg.judges if j.get("kind") == "remote"]
    sections += [s for s in (cfg.editor, cfg.embedder) if s.get("kind") == "remote"]
    for s in sections:
        _endpoint(s, cfg.rate_limits).api_key()


def _base_quality(spec: Optional[Mapping[str, Any]]):
    spec = spec or {"kind": "constant", "value": 5.0}
    if spec.get("kind") == "constant":
        return constant_quality(float(spec.get("value", 5.0)))
    if spec.get("kind") == "hashed":
        return hashed_quality(float(spec.get("low", 3.0)), float(spec.get("high", 6.0)))
    raise ConfigError(f"unknown base_quality kind {spec.get('kind')!r}")


def build_judge(section: Mapping[str, Any], rate_limits: Optional[Mapping[str, Any]] = None,
                transport=None) -> Judge:
    kind = section.get("kind", "synthetic")
    mode = section.get("mode", POINTWISE)
    mapping = section.get("mapping", "three_way")
    if kind == "synthetic":
        clamp = section.get("clamp", [1.0, 9.0])
        spec = SyntheticJudgeSpec(
            planted_weights=dict(section.get("planted_weights", {})),
            base_quality_fn=_base_quality(section.get("base_quality")),
            nonlinearity_scale=float(section.get("nonlinearity_scale", 0.0)),
            noise_sigma=float(section.get("noise_sigma", 0.0)),
            clamp=(float(clamp[0]), float(clamp[1])),
            integer_scores=bool(section.get("integer_scores", True)),
            position_bonus=float(section.get("position_bonus", 0.0)),
            seed=int(section.get("seed", 0)))
        return SyntheticJudge(spec, section["id"], mode, mapping)
    client = HTTPClient(_endpoint(section, rate_limits or {}), transport=transport)
    return RemoteJudge(client, section["id"], mode, mapping)


def build_editor(section: Mapping[str, Any], rate_limits: Optional[Mapping[str, Any]] = None, transport=None):
    if section.get("kind", "rule-based") == "rule-based":
        return RuleBasedEditor()
    if section.get("kind") == "remote":
        return LLMEditor(HTTPClient(_endpoint(section, rate_limits or {}), transport=transport))
    raise ConfigError(f"unknown editor kind {section.get('kind')!r}")


def build_embedder(section: Mapping[str, Any], rate_limits: Optional[Mapping[str, Any]] = None,
                   transport=None) -> Embedder:
    kind = section.get("kind", "offline-hashing")
    spec = EmbedderSpec(kind, int(section.get("d", 384 if kind == "remote" else 256)))
    if kind == "remote":
        client = HTTPClient(_endpoint(section, rate_limits or {}), transport=transport)
        return Embedder(spec, client, section["model"])
    return Embedder(spec)
