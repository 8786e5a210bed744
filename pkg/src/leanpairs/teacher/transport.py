"""Wire transports for the chat-completion-style teacher endpoint.

The HTTP transport POSTs a single-user-message chat payload and reads the
reply at choices[0].message.content plus usage.prompt_tokens /
usage.completion_tokens. The mock transport serves tests and dry runs with
call counting and concurrency instrumentation.
"""

from __future__ import annotations

import threading
from typing import Callable, Protocol

import requests

from ..errors import AuthError


class TransportError(Exception):
    """Retryable transport failure (timeouts, 5xx, connection errors)."""


class RateLimitError(TransportError):
    """HTTP 429; retryable with backoff."""


class Transport(Protocol):
    def send(self, prompt: str, model_name: str, temperature: float) -> tuple[str, dict]:
        """Returns (completion text, usage dict with prompt/completion tokens)."""
        ...


class HttpTransport:
    def __init__(self, endpoint_url: str, api_key: str, timeout: float = 60.0):
        if not api_key:
            raise AuthError("no API key available")
        self.endpoint_url = endpoint_url
        self.api_key = api_key
        self.timeout = timeout

    def send(self, prompt: str, model_name: str, temperature: float) -> tuple[str, dict]:
        payload = {
            "model": model_name,
            "temperature": temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        try:
            resp = requests.post(
                self.endpoint_url,
                json=payload,
                headers={"Authorization": f"Bearer {self.api_key}"},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        if resp.status_code in (401, 403):
            raise AuthError(f"endpoint rejected credentials (HTTP {resp.status_code})")
        if resp.status_code == 429:
            raise RateLimitError("rate limited (HTTP 429)")
        if resp.status_code >= 400:
            raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            body = resp.json()
            content = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed endpoint response: {exc}") from exc
        usage = body.get("usage") or {}
        return content, {
            "prompt_tokens": int(usage.get("prompt_tokens", 0) or 0),
            "completion_tokens": int(usage.get("completion_tokens", 0) or 0),
        }


class MockTransport:
    """In-process stand-in for the endpoint; instruments call behavior.

    `reply` maps a prompt to completion text (or raises). Token usage is
    reported as word counts unless `usage_fn` overrides it.
    """

    def __init__(
        self,
        reply: Callable[[str], str],
        usage_fn: Callable[[str, str], dict] | None = None,
        delay: float = 0.0,
    ):
        self.reply = reply
        self.usage_fn = usage_fn
        self.delay = delay
        self.calls = 0
        self.prompts: list[str] = []
        self.in_flight = 0
        self.max_in_flight = 0
        self._lock = threading.Lock()

    def send(self, prompt: str, model_name: str, temperature: float) -> tuple[str, dict]:
        with self._lock:
            self.calls += 1
            self.prompts.append(prompt)
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)
        try:
            if self.delay:
                threading.Event().wait(self.delay)
            content = self.reply(prompt)
            if self.usage_fn is not None:
                usage = self.usage_fn(prompt, content)
            else:
                usage = {
                    "prompt_tokens": len(prompt.split()),
                    "completion_tokens": len(content.split()),
                }
            return content, usage
        finally:
            with self._lock:
                self.in_flight -= 1
