"""Batched teacher client: caching, bounded concurrency, retries, accounting.

Every prompt in a batch yields either a parsed response or a recorded
failure; results come back in input order no matter how completions land.
Cache hits never touch the network or the ledger.
"""

from __future__ import annotations

import json
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from decimal import Decimal
from pathlib import Path
from typing import Any, Callable, Sequence

from ..errors import AuthError, EndpointError, ValidationError
from ..prompts import FORMAT_REMINDER, PromptSpec, TeacherResponse
from .cache import ResponseCache, cache_key
from .ledger import CostLedger, as_price
from .transport import HttpTransport, RateLimitError, Transport, TransportError


@dataclass
class TeacherConfig:
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    model_name: str = "gpt-4"
    api_key_env: str = "TEACHER_API_KEY"
    max_parallel: int = 4
    max_retries: int = 3
    price_per_1k_input_tokens: Decimal = field(default_factory=lambda: Decimal("0"))
    price_per_1k_output_tokens: Decimal = field(default_factory=lambda: Decimal("0"))
    # decoding settings are unreported upstream; 0.0 favors reproducibility
    temperature: float = 0.0
    request_timeout: float = 60.0
    backoff_base: float = 0.5

    def __post_init__(self):
        self.price_per_1k_input_tokens = as_price(self.price_per_1k_input_tokens)
        self.price_per_1k_output_tokens = as_price(self.price_per_1k_output_tokens)
        if self.max_parallel < 1:
            raise ValidationError("max_parallel must be >= 1")
        if self.max_retries < 0:
            raise ValidationError("max_retries must be >= 0")
        if self.price_per_1k_input_tokens < 0 or self.price_per_1k_output_tokens < 0:
            raise ValidationError("prices must be >= 0")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValidationError("temperature must lie in [0, 2]")

    @classmethod
    def from_json_dict(cls, obj: dict[str, Any]) -> "TeacherConfig":
        known = {
            "endpoint_url",
            "model_name",
            "api_key_env",
            "max_parallel",
            "max_retries",
            "price_per_1k_input_tokens",
            "price_per_1k_output_tokens",
            "temperature",
            "request_timeout",
        }
        unknown = set(obj) - known
        if unknown:
            raise ValidationError(f"unknown teacher config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def from_file(cls, path: str | Path) -> "TeacherConfig":
        with Path(path).open("r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "endpoint_url": self.endpoint_url,
            "model_name": self.model_name,
            "api_key_env": self.api_key_env,
            "max_parallel": self.max_parallel,
            "max_retries": self.max_retries,
            "price_per_1k_input_tokens": str(self.price_per_1k_input_tokens),
            "price_per_1k_output_tokens": str(self.price_per_1k_output_tokens),
            "temperature": self.temperature,
            "request_timeout": self.request_timeout,
        }


@dataclass
class BatchItem:
    """Outcome for one prompt of a batch, in input order."""

    prompt_text: str
    method: str
    response: TeacherResponse | None = None
    error: str | None = None
    cached: bool = False
    input_tokens: int = 0
    output_tokens: int = 0

    @property
    def ok(self) -> bool:
        return self.response is not None and self.response.parsed is not None


class TeacherClient:
    def __init__(
        self,
        cfg: TeacherConfig,
        cache_dir: str | Path | None = None,
        transport: Transport | None = None,
        token_counter: Callable[[str], int] | None = None,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        self.cfg = cfg
        self.cache = ResponseCache(cache_dir) if cache_dir else None
        self._transport = transport
        self._token_counter = token_counter
        self.ledger = CostLedger()
        self._sleep = sleep
        self._rng = rng or random.Random(0)
        self._lock = threading.Lock()

    def _resolve_transport(self) -> Transport:
        if self._transport is None:
            api_key = os.environ.get(self.cfg.api_key_env, "")
            if not api_key:
                raise AuthError(
                    f"API key env var {self.cfg.api_key_env!r} is not set"
                )
            self._transport = HttpTransport(
                self.cfg.endpoint_url, api_key, timeout=self.cfg.request_timeout
            )
        return self._transport

    def _count_tokens(self, text: str) -> int:
        if self._token_counter is None:
            from ..tokenizer import BpeTokenizer

            tok = BpeTokenizer.reference()
            self._token_counter = tok.count
        return self._token_counter(text)

    def _send_with_retries(self, transport: Transport, prompt: str) -> tuple[str, dict]:
        attempt = 0
        while True:
            try:
                return transport.send(prompt, self.cfg.model_name, self.cfg.temperature)
            except (TransportError, RateLimitError) as exc:
                if attempt >= self.cfg.max_retries:
                    raise EndpointError(
                        f"gave up after {attempt + 1} attempts: {exc}"
                    ) from exc
                delay = self.cfg.backoff_base * (2**attempt)
                delay += self._rng.uniform(0, delay / 2)
                self._sleep(delay)
                attempt += 1

    def _usage_tokens(self, prompt: str, content: str, usage: dict) -> tuple[int, int]:
        input_tokens = int(usage.get("prompt_tokens", 0) or 0)
        output_tokens = int(usage.get("completion_tokens", 0) or 0)
        if input_tokens == 0 and output_tokens == 0:
            # no endpoint-reported usage (e.g. a bare mock): estimate locally
            input_tokens = self._count_tokens(prompt)
            output_tokens = self._count_tokens(content)
        return input_tokens, output_tokens

    def informalize_batch(
        self,
        prompts: Sequence[PromptSpec | str],
        budget: Decimal | float | str | None = None,
        method: str = "full_proof_6shot",
    ) -> tuple[list[BatchItem], CostLedger]:
        """Resolve every prompt through cache or endpoint.

        Returns (items in input order, ledger delta for this call). The
        client's cumulative ledger is updated as well. A budget bounds the
        estimated spend of this call: once reached, remaining non-cached
        prompts are recorded as skipped failures. Prompts that share a cache
        key are serviced by a single request.
        """
        budget_dec = None if budget is None else as_price(budget)
        delta = CostLedger()
        abort = threading.Event()

        rendered: list[tuple[str, str]] = []
        keys: list[str] = []
        first_index: dict[str, int] = {}
        for spec in prompts:
            if isinstance(spec, PromptSpec):
                rendered.append((spec.render(), spec.method))
            else:
                rendered.append((str(spec), method))
            key = cache_key(self.cfg.model_name, self.cfg.temperature, rendered[-1][0])
            keys.append(key)
            first_index.setdefault(key, len(keys) - 1)

        def handle(idx: int) -> BatchItem:
            prompt, prompt_method = rendered[idx]
            if abort.is_set():
                return BatchItem(prompt, prompt_method, error="batch aborted")
            if self.cache is not None:
                entry = self.cache.get(keys[idx])
                if entry is not None:
                    content = entry["response"]["content"]
                    return BatchItem(
                        prompt,
                        prompt_method,
                        response=TeacherResponse.from_raw(content),
                        cached=True,
                    )
            with self._lock:
                if budget_dec is not None and delta.total_cost >= budget_dec:
                    return BatchItem(
                        prompt, prompt_method, error="budget exhausted before request"
                    )
            transport = self._resolve_transport()
            try:
                content, usage = self._send_with_retries(transport, prompt)
            except EndpointError as exc:
                return BatchItem(prompt, prompt_method, error=str(exc))
            input_tokens, output_tokens = self._usage_tokens(prompt, content, usage)

            response = TeacherResponse.from_raw(content)
            if response.parsed is None:
                # one corrective retry with an appended format reminder
                retry_prompt = prompt + "\n" + FORMAT_REMINDER
                try:
                    retry_content, retry_usage = self._send_with_retries(
                        transport, retry_prompt
                    )
                    extra_in, extra_out = self._usage_tokens(
                        retry_prompt, retry_content, retry_usage
                    )
                    input_tokens += extra_in
                    output_tokens += extra_out
                    response = TeacherResponse.from_raw(retry_content)
                    content = retry_content
                except EndpointError:
                    pass  # keep the original unparseable response

            with self._lock:
                delta.record(
                    prompt_method,
                    input_tokens,
                    output_tokens,
                    self.cfg.price_per_1k_input_tokens,
                    self.cfg.price_per_1k_output_tokens,
                )
            if self.cache is not None and response.parsed is not None:
                self.cache.put(
                    keys[idx],
                    self.cfg.model_name,
                    self.cfg.temperature,
                    prompt,
                    content,
                    {"prompt_tokens": input_tokens, "completion_tokens": output_tokens},
                )
            error = None
            if response.parsed is None:
                error = "TeacherFormatError: no parseable tuple after format reminder"
            return BatchItem(
                prompt,
                prompt_method,
                response=response,
                error=error,
                input_tokens=input_tokens,
                output_tokens=output_tokens,
            )

        def guarded(idx: int) -> BatchItem:
            try:
                return handle(idx)
            except AuthError:
                abort.set()
                raise

        unique_indices = sorted(first_index.values())
        results: dict[int, BatchItem] = {}
        auth_failure: AuthError | None = None
        with ThreadPoolExecutor(max_workers=self.cfg.max_parallel) as pool:
            futures = {i: pool.submit(guarded, i) for i in unique_indices}
            for i, future in futures.items():
                try:
                    results[i] = future.result()
                except AuthError as exc:
                    auth_failure = exc
        if auth_failure is not None:
            raise auth_failure

        items: list[BatchItem] = []
        for idx, (prompt, prompt_method) in enumerate(rendered):
            rep = results[first_index[keys[idx]]]
            if idx == first_index[keys[idx]]:
                items.append(rep)
            else:
                # duplicate of an earlier prompt: reuse its outcome, no request
                items.append(
                    replace(rep, prompt_text=prompt, method=prompt_method, cached=True)
                )

        self.ledger.merge(delta)
        return items, delta
