"""Token usage and spend accounting, exact to the cent and below.

All money math uses Decimal: estimated cost is defined as
input_tokens/1000 * input price + output_tokens/1000 * output price,
as an exact identity rather than a float approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any

_THOUSAND = Decimal(1000)

ESTIMATE_METHODS = ("full_proof", "individual_tactics")


def as_price(value: float | int | str | Decimal) -> Decimal:
    """Convert a price knob to Decimal without float noise."""
    if isinstance(value, Decimal):
        return value
    return Decimal(str(value))


@dataclass
class MethodUsage:
    requests: int = 0
    input_tokens: int = 0
    output_tokens: int = 0
    estimated_cost: Decimal = field(default_factory=lambda: Decimal(0))

    @property
    def cost_per_proof(self) -> Decimal:
        return self.estimated_cost / Decimal(max(1, self.requests))

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "requests": self.requests,
            "input_tokens": self.input_tokens,
            "output_tokens": self.output_tokens,
            "estimated_cost": str(self.estimated_cost),
            "cost_per_proof": str(self.cost_per_proof),
        }


class CostLedger:
    """Per-method accumulators for teacher API usage."""

    def __init__(self):
        self.methods: dict[str, MethodUsage] = {}

    def record(
        self,
        method: str,
        input_tokens: int,
        output_tokens: int,
        price_per_1k_input: Decimal,
        price_per_1k_output: Decimal,
    ) -> Decimal:
        """Add one serviced request; returns the cost delta."""
        usage = self.methods.setdefault(method, MethodUsage())
        usage.requests += 1
        usage.input_tokens += input_tokens
        usage.output_tokens += output_tokens
        delta = (
            Decimal(input_tokens) / _THOUSAND * as_price(price_per_1k_input)
            + Decimal(output_tokens) / _THOUSAND * as_price(price_per_1k_output)
        )
        usage.estimated_cost += delta
        return delta

    def merge(self, other: "CostLedger") -> None:
        for method, usage in other.methods.items():
            mine = self.methods.setdefault(method, MethodUsage())
            mine.requests += usage.requests
            mine.input_tokens += usage.input_tokens
            mine.output_tokens += usage.output_tokens
            mine.estimated_cost += usage.estimated_cost

    @property
    def total_requests(self) -> int:
        return sum(u.requests for u in self.methods.values())

    @property
    def total_cost(self) -> Decimal:
        return sum((u.estimated_cost for u in self.methods.values()), Decimal(0))

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "methods": {m: u.to_json_dict() for m, u in sorted(self.methods.items())},
            "total_requests": self.total_requests,
            "total_estimated_cost": str(self.total_cost),
        }


def estimate_cost(
    method: str,
    n_proofs: int,
    price_per_1k_input: Decimal | float | str,
    price_per_1k_output: Decimal | float | str,
    avg_tokens: tuple[int, int],
) -> Decimal:
    """Projected spend for informalizing `n_proofs` items at average usage."""
    if method not in ESTIMATE_METHODS:
        raise ValueError(f"method must be one of {ESTIMATE_METHODS}, got {method!r}")
    if n_proofs < 0:
        raise ValueError("n_proofs must be >= 0")
    avg_in, avg_out = avg_tokens
    per_proof = (
        Decimal(avg_in) / _THOUSAND * as_price(price_per_1k_input)
        + Decimal(avg_out) / _THOUSAND * as_price(price_per_1k_output)
    )
    return per_proof * Decimal(n_proofs)
