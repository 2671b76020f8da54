"""Context featurizer mapping (question, answer) to a unit-norm vector."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .clients import ConfigError, HTTPClient

CONTEXT_FORMAT = "Q: {question}\nA: {answer}"
NGRAM = 3


@dataclass(frozen=True)
class EmbedderSpec:
    kind: str = "offline-hashing"
    d: int = 256
    normalize: bool = True

    def __post_init__(self):
        if self.kind not in ("offline-hashing", "remote"):
            raise ConfigError(f"unknown embedder kind {self.kind!r}")
        if self.kind == "offline-hashing" and self.d < 8:
            raise ConfigError("offline embedder needs d >= 8")
        if not self.normalize:
            raise ConfigError("embeddings are always normalized")


@lru_cache(maxsize=200_000)
def _bucket(gram: str, d: int):
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
    h = int.from_bytes(digest, "little")
    return h % d, 1.0 if (h >> 63) & 1 else -1.0


def _unit(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        v = np.zeros_like(v)
        v[0] = 1.0
        return v
    return v / norm


@lru_cache(maxsize=16_384)
def hash_embed(text: str, d: int) -> np.ndarray:
    """Signed feature hashing of lower-cased character trigrams, L2-normalized.

    Results are cached and returned read-only.
    """
    v = np.zeros(d)
    t = text.lower()
    for i in range(len(t) - NGRAM + 1):
        j, s = _bucket(t[i:i + NGRAM], d)
        v[j] += s
    v = _unit(v)
    v.flags.writeable = False
    return v


class Embedder:
    """Deterministic offline embedder, or a remote embedding service client."""

    def __init__(self, spec: EmbedderSpec = EmbedderSpec(), client: Optional[HTTPClient] = None,
                 model: Optional[str] = None):
        self.spec = spec
        if spec.kind == "remote" and client is None:
            raise ConfigError("remote embedder requires an HTTP client")
        self.client = client
        self.model = model

    @property
    def d(self) -> int:
        return self.spec.d

    def embed_text(self, text: str) -> np.ndarray:
        if self.spec.kind == "offline-hashing":
            return hash_embed(text, self.spec.d)
        body = self.client.post_json("/embeddings", {"model": self.model, "input": text})
        try:
            vec = np.asarray(body["data"][0]["embedding"], dtype=float)
        except (KeyError, IndexError, TypeError) as exc:
            raise ConfigError(f"malformed embedding response: {exc}") from exc
        if vec.shape != (self.spec.d,):
            raise ConfigError(f"embedding service returned dimension {vec.shape}, expected {self.spec.d}")
        return _unit(vec)

    def embed(self, question: str, answer: str) -> np.ndarray:
        return self.embed_text(CONTEXT_FORMAT.format(question=question, answer=answer))

    def similarity(self, a: str, b: str) -> float:
        return float(np.clip(self.embed_text(a) @ self.embed_text(b), -1.0, 1.0))


def embed(spec: EmbedderSpec, question: str, answer: str) -> np.ndarray:
    return Embedder(spec).embed(question, answer)


def semantic_similarity(spec: EmbedderSpec, a: str, b: str) -> float:
    return Embedder(spec).similarity(a, b)
