"""Minimal chat-completion client for OpenAI-compatible endpoints."""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from typing import Callable, Optional, Protocol

import httpx

log = logging.getLogger(__name__)


class LlmError(RuntimeError):
    reason = "llm-error"


class EndpointUnavailable(LlmError):
    reason = "endpoint-unavailable"


class Timeout(LlmError):
    reason = "timeout"


class EmptyResponse(LlmError):
    reason = "empty-response"


class Completer(Protocol):
    def complete(self, prompt: str) -> str: ...


@dataclass(frozen=True)
class LlmEndpoint:
    base_url: str
    model: str
    token_env: Optional[str] = "OPENAI_API_KEY"
    timeout: float = 120.0
    max_retries: int = 2
    temperature: Optional[float] = None

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    @property
    def url(self) -> str:
        return self.base_url.rstrip("/") + "/chat/completions"


class ChatClient:
    """Sends one user message per call and returns the first choice's content."""

    def __init__(
        self,
        endpoint: LlmEndpoint,
        transport: Optional[httpx.BaseTransport] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.endpoint = endpoint
        self._sleep = sleep
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(endpoint.token_env) if endpoint.token_env else None
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self._http = httpx.Client(headers=headers, timeout=endpoint.timeout, transport=transport)

    def close(self) -> None:
        self._http.close()

    def payload(self, prompt: str) -> dict:
        body = {"model": self.endpoint.model, "messages": [{"role": "user", "content": prompt}]}
        if self.endpoint.temperature is not None:
            body["temperature"] = self.endpoint.temperature
        return body

    def complete(self, prompt: str) -> str:
        last: LlmError = EndpointUnavailable("no attempt made")
        for attempt in range(self.endpoint.max_retries + 1):
            if attempt:
                self._sleep(min(0.5 * 2 ** (attempt - 1), 8.0))
            try:
                resp = self._http.post(self.endpoint.url, json=self.payload(prompt))
            except httpx.TimeoutException as exc:
                last = Timeout(str(exc) or "request timed out")
                continue
            except httpx.HTTPError as exc:
                last = EndpointUnavailable(str(exc))
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last = EndpointUnavailable(f"HTTP {resp.status_code}")
                log.warning("endpoint %s returned %s (attempt %d)", self.endpoint.url, resp.status_code, attempt + 1)
                continue
            if resp.status_code >= 400:
                raise EndpointUnavailable(f"HTTP {resp.status_code}: {resp.text[:200]}")
            return _content(resp)
        raise last


def _content(resp: httpx.Response) -> str:
    try:
        content = resp.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise EmptyResponse(f"malformed completion body: {exc}") from exc
    if not isinstance(content, str) or not content.strip():
        raise EmptyResponse("completion content is empty")
    return content
