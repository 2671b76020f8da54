"""HTTP plumbing shared by remote judges, editors and embedders.

Endpoints speak the OpenAI-compatible wire format (``/chat/completions`` and
``/embeddings``). Credentials are only ever read from environment variables.
"""

from __future__ import annotations

import logging
import os
import threading
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

import httpx

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid or incomplete configuration, raised before any run starts."""


class RetryableError(RuntimeError):
    """Transport failure or timeout; the caller may try again."""


class EditFailedError(RuntimeError):
    """The editor produced no usable text; the round is skipped."""


class JudgeParseError(RuntimeError):
    """The judge response held no parseable verdict; the round is skipped."""


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model: str
    api_key_env: Optional[str] = None
    timeout: float = 60.0
    max_attempts: int = 3
    backoff_base: float = 1.0
    max_in_flight: int = 4
    requests_per_second: Optional[float] = None
    temperature: float = 0.0

    def api_key(self) -> Optional[str]:
        if self.api_key_env is None:
            return None
        key = os.environ.get(self.api_key_env)
        if not key:
            raise ConfigError(f"environment variable {self.api_key_env} is not set")
        return key


class _RateLimiter:
    def __init__(self, per_second: Optional[float]):
        self._interval = 1.0 / per_second if per_second else 0.0
        self._lock = threading.Lock()
        self._next = 0.0

    def wait(self):
        if not self._interval:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._next - now
            self._next = max(now, self._next) + self._interval
        if delay > 0:
            time.sleep(delay)


class HTTPClient:
    """POST JSON with bounded retries, a request-rate cap and an in-flight cap.

    ``on_exchange`` receives every request/response pair with the auth
    header redacted, for verbatim run logging.
    """

    def __init__(self, cfg: EndpointConfig, transport: Optional[httpx.BaseTransport] = None,
                 on_exchange: Optional[Callable[[dict], None]] = None,
                 sleep: Callable[[float], None] = time.sleep):
        self.cfg = cfg
        headers = {"Content-Type": "application/json"}
        key = cfg.api_key()
        if key:
            headers["Authorization"] = f"Bearer {key}"
        self._http = httpx.Client(base_url=cfg.base_url.rstrip("/"), headers=headers,
                                  timeout=cfg.timeout, transport=transport)
        self._slots = threading.BoundedSemaphore(max(1, cfg.max_in_flight))
        self._limiter = _RateLimiter(cfg.requests_per_second)
        self._sleep = sleep
        self.on_exchange = on_exchange
        self.exchanges: List[dict] = []

    def _record(self, entry: dict):
        self.exchanges.append(entry)
        if self.on_exchange is not None:
            self.on_exchange(entry)

    def post_json(self, path: str, payload: dict) -> dict:
        last: Optional[Exception] = None
        for attempt in range(1, self.cfg.max_attempts + 1):
            self._limiter.wait()
            with self._slots:
                try:
                    resp = self._http.post(path, json=payload)
                except (httpx.TransportError, httpx.TimeoutException) as exc:
                    last = exc
                    self._record({"path": path, "request": payload, "error": repr(exc),
                                  "attempt": attempt, "headers": {"Authorization": "<redacted>"}})
                else:
                    self._record({"path": path, "request": payload, "status": resp.status_code,
                                  "response": resp.text, "attempt": attempt,
                                  "headers": {"Authorization": "<redacted>"}})
                    if resp.status_code == 429 or resp.status_code >= 500:
                        last = RetryableError(f"HTTP {resp.status_code} from {path}")
                    elif resp.status_code >= 400:
                        raise ConfigError(f"HTTP {resp.status_code} from {path}: {resp.text[:200]}")
                    else:
                        try:
                            return resp.json()
                        except ValueError as exc:
                            last = RetryableError(f"non-JSON body from {path}: {exc}")
            if attempt < self.cfg.max_attempts:
                delay = self.cfg.backoff_base * 2 ** (attempt - 1)
                log.warning("request to %s failed (%s); retry %d in %.1fs", path, last, attempt, delay)
                self._sleep(delay)
        raise RetryableError(f"{path} failed after {self.cfg.max_attempts} attempts: {last}")

    def complete(self, prompt: str, system: Optional[str] = None) -> str:
        messages = []
        if system:
            messages.append({"role": "system", "content": system})
        messages.append({"role": "user", "content": prompt})
        body = self.post_json("/chat/completions", {
            "model": self.cfg.model,
            "messages": messages,
            "temperature": self.cfg.temperature,
        })
        try:
            return body["choices"][0]["message"]["content"] or ""
        except (KeyError, IndexError, TypeError):
            return ""

    def close(self):
        self._http.close()
