from __future__ import annotations

import json
import threading
from decimal import Decimal
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from leanpairs.errors import AuthError, ValidationError
from leanpairs.prompts import render_pair
from leanpairs.teacher import (
    CostLedger,
    HttpTransport,
    MockTransport,
    TeacherClient,
    TeacherConfig,
    cache_key,
    estimate_cost,
)
from leanpairs.teacher.transport import RateLimitError, TransportError


def echo_reply(prompt: str) -> str:
    return render_pair(prompt[:20], f"explained: {prompt[:10]}")


def _cfg(**kwargs) -> TeacherConfig:
    defaults = dict(
        model_name="mock-teacher",
        max_parallel=4,
        max_retries=2,
        price_per_1k_input_tokens=Decimal("0.03"),
        price_per_1k_output_tokens=Decimal("0.06"),
        backoff_base=0.0,
    )
    defaults.update(kwargs)
    return TeacherConfig(**defaults)


def _client(transport, tmp_path=None, cfg=None, **kwargs) -> TeacherClient:
    return TeacherClient(
        cfg or _cfg(),
        cache_dir=tmp_path,
        transport=transport,
        token_counter=lambda text: len(text.split()),
        sleep=lambda s: None,
        **kwargs,
    )


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValidationError):
            TeacherConfig(max_parallel=0)
        with pytest.raises(ValidationError):
            TeacherConfig(max_retries=-1)
        with pytest.raises(ValidationError):
            TeacherConfig(temperature=3.0)
        with pytest.raises(ValidationError):
            TeacherConfig(price_per_1k_input_tokens=Decimal("-1"))

    def test_prices_become_decimal(self):
        cfg = TeacherConfig(price_per_1k_input_tokens=0.03)
        assert cfg.price_per_1k_input_tokens == Decimal("0.03")

    def test_unknown_config_key_rejected(self):
        with pytest.raises(ValidationError):
            TeacherConfig.from_json_dict({"modle_name": "oops"})


class TestLedger:
    def test_exact_decimal_arithmetic(self):
        ledger = CostLedger()
        delta = ledger.record("full_proof_6shot", 1000, 500, Decimal("0.03"), Decimal("0.06"))
        assert delta == Decimal("0.06")
        assert ledger.methods["full_proof_6shot"].estimated_cost == Decimal("0.06")

    def test_cost_per_proof(self):
        ledger = CostLedger()
        for _ in range(4):
            ledger.record("individual_tactics", 1000, 500, Decimal("0.1"), Decimal("0.1"))
        usage = ledger.methods["individual_tactics"]
        assert usage.cost_per_proof == Decimal("0.15")

    def test_estimate_zero_proofs(self):
        assert estimate_cost("full_proof", 0, "0.03", "0.06", (1000, 500)) == Decimal("0")

    def test_estimate_full_proof_tier(self):
        # usage calibrated to $0.05/proof: 1000 in @0.03 + 333.33.. out @0.06
        cost = estimate_cost("full_proof", 348, "0.03", "0.06", (1000, 500))
        assert cost == Decimal("348") * Decimal("0.06")
        # a flat $0.05-per-proof price over a 348-item run
        cost = estimate_cost("full_proof", 348, "0.05", "0", (1000, 0))
        assert cost == Decimal("17.40")

    def test_estimate_tactic_tier(self):
        cost = estimate_cost("individual_tactics", 100, "0.15", "0", (1000, 0))
        assert cost == Decimal("15.00")

    def test_estimate_rejects_unknown_method(self):
        with pytest.raises(ValueError):
            estimate_cost("zero_shot", 1, "0.1", "0.1", (1, 1))
        with pytest.raises(ValueError):
            estimate_cost("full_proof", -1, "0.1", "0.1", (1, 1))


class TestBatch:
    def test_three_prompts_three_responses(self, tmp_path):
        transport = MockTransport(echo_reply)
        client = _client(transport, tmp_path)
        prompts = [f"prompt number {i}" for i in range(3)]
        items, delta = client.informalize_batch(prompts, method="full_proof_6shot")
        assert len(items) == 3
        assert all(item.ok for item in items)
        assert delta.methods["full_proof_6shot"].requests == 3
        assert transport.calls == 3

    def test_resubmission_hits_cache(self, tmp_path):
        transport = MockTransport(echo_reply)
        client = _client(transport, tmp_path)
        prompts = [f"prompt number {i}" for i in range(3)]
        client.informalize_batch(prompts)
        items, delta = client.informalize_batch(prompts)
        assert transport.calls == 3  # no new network traffic
        assert all(item.cached for item in items)
        assert delta.total_requests == 0 and delta.total_cost == Decimal("0")

    def test_cache_survives_client_restart(self, tmp_path):
        transport = MockTransport(echo_reply)
        _client(transport, tmp_path).informalize_batch(["alpha"])
        second = MockTransport(echo_reply)
        items, _ = _client(second, tmp_path).informalize_batch(["alpha"])
        assert second.calls == 0
        assert items[0].cached and items[0].ok

    def test_duplicate_prompts_in_one_batch_share_a_call(self, tmp_path):
        transport = MockTransport(echo_reply)
        client = _client(transport, tmp_path)
        items, delta = client.informalize_batch(["same"] * 5)
        assert transport.calls == 1
        assert all(item.ok for item in items)
        assert delta.total_requests == 1

    def test_output_order_matches_input_order(self, tmp_path):
        transport = MockTransport(echo_reply, delay=0.002)
        client = _client(transport, tmp_path, cfg=_cfg(max_parallel=8))
        prompts = [f"p{i}" for i in range(16)]
        items, _ = client.informalize_batch(prompts)
        assert [item.prompt_text for item in items] == prompts

    def test_concurrency_never_exceeds_max_parallel(self, tmp_path):
        transport = MockTransport(echo_reply, delay=0.01)
        client = _client(transport, tmp_path, cfg=_cfg(max_parallel=3))
        client.informalize_batch([f"p{i}" for i in range(12)])
        assert 1 <= transport.max_in_flight <= 3

    def test_ledger_uses_endpoint_usage_when_reported(self, tmp_path):
        transport = MockTransport(
            echo_reply, usage_fn=lambda p, c: {"prompt_tokens": 1000, "completion_tokens": 500}
        )
        client = _client(transport, tmp_path)
        _, delta = client.informalize_batch(["x"], method="full_proof_6shot")
        assert delta.methods["full_proof_6shot"].estimated_cost == Decimal("0.06")

    def test_format_error_retried_once_with_reminder(self, tmp_path):
        state = {"calls": 0}

        def flaky_format(prompt: str) -> str:
            state["calls"] += 1
            if state["calls"] == 1:
                return "I will not obey the format."
            return "('fixed', 'now')"

        transport = MockTransport(flaky_format)
        client = _client(transport, tmp_path)
        items, delta = client.informalize_batch(["please"])
        assert items[0].ok and items[0].response.parsed == ("fixed", "now")
        assert transport.calls == 2
        assert "match the exact format" in transport.prompts[1]
        assert delta.total_requests == 1  # one serviced prompt, usage summed

    def test_persistent_format_failure_recorded_not_raised(self, tmp_path):
        transport = MockTransport(lambda p: "never a tuple")
        client = _client(transport, tmp_path)
        items, delta = client.informalize_batch(["please"])
        assert not items[0].ok
        assert "TeacherFormatError" in items[0].error
        assert transport.calls == 2  # original + one reminder retry
        assert delta.total_requests == 1

    def test_transport_errors_retried_then_succeed(self, tmp_path):
        state = {"calls": 0}

        def flaky(prompt: str) -> str:
            state["calls"] += 1
            if state["calls"] < 3:
                raise TransportError("boom")
            return echo_reply(prompt)

        transport = MockTransport(flaky)
        client = _client(transport, tmp_path, cfg=_cfg(max_retries=3))
        items, _ = client.informalize_batch(["x"])
        assert items[0].ok

    def test_endpoint_error_is_per_item(self, tmp_path):
        def selective(prompt: str) -> str:
            if prompt == "bad":
                raise TransportError("always down")
            return echo_reply(prompt)

        transport = MockTransport(selective)
        client = _client(transport, tmp_path, cfg=_cfg(max_retries=1))
        items, delta = client.informalize_batch(["good", "bad", "also good"])
        assert items[0].ok and items[2].ok
        assert not items[1].ok and "gave up" in items[1].error
        assert delta.total_requests == 2  # failures without usage don't count

    def test_rate_limit_retried(self, tmp_path):
        state = {"calls": 0}

        def limited(prompt: str) -> str:
            state["calls"] += 1
            if state["calls"] == 1:
                raise RateLimitError("429")
            return echo_reply(prompt)

        client = _client(MockTransport(limited), tmp_path)
        items, _ = client.informalize_batch(["x"])
        assert items[0].ok

    def test_auth_error_aborts_batch(self, tmp_path):
        def forbidden(prompt: str) -> str:
            raise AuthError("401")

        client = _client(MockTransport(forbidden), tmp_path)
        with pytest.raises(AuthError):
            client.informalize_batch(["a", "b", "c"])

    def test_missing_api_key_env_aborts(self, tmp_path, monkeypatch):
        monkeypatch.delenv("TEACHER_API_KEY", raising=False)
        client = TeacherClient(_cfg(), cache_dir=tmp_path)
        with pytest.raises(AuthError):
            client.informalize_batch(["x"])

    def test_budget_zero_blocks_all_requests(self, tmp_path):
        transport = MockTransport(echo_reply)
        client = _client(transport, tmp_path)
        items, delta = client.informalize_batch(["a", "b"], budget=Decimal("0"))
        assert transport.calls == 0
        assert all(not item.ok and "budget" in item.error for item in items)
        assert delta.total_requests == 0

    def test_budget_zero_still_replays_cache(self, tmp_path):
        transport = MockTransport(echo_reply)
        client = _client(transport, tmp_path)
        client.informalize_batch(["a"])
        items, _ = client.informalize_batch(["a", "b"], budget=Decimal("0"))
        assert items[0].ok and items[0].cached
        assert not items[1].ok

    def test_budget_stops_after_threshold(self, tmp_path):
        transport = MockTransport(
            echo_reply,
            usage_fn=lambda p, c: {"prompt_tokens": 1000, "completion_tokens": 500},
        )
        client = _client(transport, tmp_path, cfg=_cfg(max_parallel=1))
        items, delta = client.informalize_batch(
            [f"p{i}" for i in range(5)], budget=Decimal("0.10")
        )
        # each request costs 0.06; the second reaches 0.12 >= 0.10, so later
        # prompts are skipped
        assert delta.total_requests == 2
        assert sum(1 for item in items if item.ok) == 2


class TestCacheInternals:
    def test_key_varies_with_all_components(self):
        base = cache_key("m", 0.0, "p")
        assert cache_key("m2", 0.0, "p") != base
        assert cache_key("m", 0.5, "p") != base
        assert cache_key("m", 0.0, "p2") != base

    def test_corrupt_entry_reads_as_miss(self, tmp_path):
        transport = MockTransport(echo_reply)
        client = _client(transport, tmp_path)
        client.informalize_batch(["x"])
        entry = next(tmp_path.glob("*.json"))
        entry.write_text("{ truncated", encoding="utf-8")
        items, _ = client.informalize_batch(["x"])
        assert transport.calls == 2  # miss, refetched
        assert items[0].ok

    def test_no_temp_files_left_behind(self, tmp_path):
        client = _client(MockTransport(echo_reply), tmp_path)
        client.informalize_batch([f"p{i}" for i in range(8)])
        assert not list(tmp_path.glob("*.tmp"))


class _Handler(BaseHTTPRequestHandler):
    behavior = "ok"
    seen: list[dict] = []

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        type(self).seen.append(
            {"body": body, "auth": self.headers.get("Authorization", "")}
        )
        if type(self).behavior == "reject":
            self.send_response(401)
            self.end_headers()
            return
        if type(self).behavior == "flaky_then_ok" and len(type(self).seen) == 1:
            self.send_response(429)
            self.end_headers()
            return
        reply = {
            "choices": [
                {"message": {"content": render_pair(body["messages"][0]["content"][:10], "ok")}}
            ],
            "usage": {"prompt_tokens": 7, "completion_tokens": 3},
        }
        payload = json.dumps(reply).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture()
def http_teacher():
    _Handler.seen = []
    _Handler.behavior = "ok"
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}/v1/chat/completions"
    server.shutdown()


class TestHttpTransport:
    def test_wire_protocol_shape(self, http_teacher):
        transport = HttpTransport(http_teacher, api_key="sk-test")
        content, usage = transport.send("hello proof", "gpt-test", 0.25)
        assert usage == {"prompt_tokens": 7, "completion_tokens": 3}
        seen = _Handler.seen[0]
        assert seen["auth"] == "Bearer sk-test"
        assert seen["body"]["model"] == "gpt-test"
        assert seen["body"]["temperature"] == 0.25
        assert seen["body"]["messages"] == [{"role": "user", "content": "hello proof"}]
        assert content.startswith("(")

    def test_http_401_becomes_auth_error(self, http_teacher):
        _Handler.behavior = "reject"
        transport = HttpTransport(http_teacher, api_key="sk-test")
        with pytest.raises(AuthError):
            transport.send("x", "m", 0.0)

    def test_rate_limit_maps_to_retryable(self, http_teacher):
        _Handler.behavior = "flaky_then_ok"
        transport = HttpTransport(http_teacher, api_key="sk-test")
        with pytest.raises(RateLimitError):
            transport.send("x", "m", 0.0)
        content, _ = transport.send("x", "m", 0.0)
        assert content.startswith("(")

    def test_client_end_to_end_over_http(self, http_teacher, tmp_path, monkeypatch):
        monkeypatch.setenv("TEACHER_API_KEY", "sk-env")
        cfg = _cfg(endpoint_url=http_teacher)
        client = TeacherClient(cfg, cache_dir=tmp_path)
        items, delta = client.informalize_batch(["one", "two"])
        assert all(item.ok for item in items)
        assert delta.total_requests == 2
