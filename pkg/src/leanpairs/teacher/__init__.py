"""Teacher endpoint client with caching, retries, and cost accounting."""

from .cache import ResponseCache, cache_key
from .client import BatchItem, TeacherClient, TeacherConfig
from .ledger import CostLedger, MethodUsage, as_price, estimate_cost
from .transport import HttpTransport, MockTransport, RateLimitError, TransportError

__all__ = [
    "ResponseCache",
    "cache_key",
    "BatchItem",
    "TeacherClient",
    "TeacherConfig",
    "CostLedger",
    "MethodUsage",
    "as_price",
    "estimate_cost",
    "HttpTransport",
    "MockTransport",
    "RateLimitError",
    "TransportError",
]
