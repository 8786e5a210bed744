"""The four-step round-trip training loop over a pluggable translator.

Each step, in this order and never reordered: (1) translate a batch of formal
text to informal, (2) translate the synthetic informal text back to formal,
(3) score the generated formal against the originals, (4) let the translator
update itself from that loss. The engine owns batching, tracing, plateau
detection, and capture of the synthetic pairs; all learning lives behind
the TranslatorPort interface.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

from ..errors import TranslatorError, ValidationError


class TranslatorPort(Protocol):
    def fl_to_il(self, batch: Sequence[str]) -> list[str]: ...

    def il_to_fl(self, batch: Sequence[str]) -> list[str]: ...

    def loss(self, generated: Sequence[str], reference: Sequence[str]) -> float: ...

    def update(self, loss: float) -> None: ...


@dataclass(frozen=True)
class LoopConfig:
    # batch size and step count are defaults sized for desk-scale runs
    batch_size: int = 16
    max_steps: int = 500
    eval_every: int = 50
    seed: int = 0
    plateau_window: int = 25
    plateau_epsilon: float = 1e-4

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValidationError("batch_size must be >= 1")
        if self.max_steps < 1:
            raise ValidationError("max_steps must be >= 1")
        if not 1 <= self.eval_every <= self.max_steps:
            raise ValidationError("eval_every must lie in [1, max_steps]")
        if self.plateau_window < 1:
            raise ValidationError("plateau_window must be >= 1")
        if self.plateau_epsilon < 0:
            raise ValidationError("plateau_epsilon must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "max_steps": self.max_steps,
            "eval_every": self.eval_every,
            "seed": self.seed,
            "plateau_window": self.plateau_window,
            "plateau_epsilon": self.plateau_epsilon,
        }


@dataclass(frozen=True)
class StepRecord:
    step: int
    train_loss: float
    eval_loss: float | None = None


@dataclass
class LoopTrace:
    records: list[StepRecord] = field(default_factory=list)
    initial_eval_loss: float | None = None
    plateau_step: int | None = None

    @property
    def final_eval_loss(self) -> float | None:
        for record in reversed(self.records):
            if record.eval_loss is not None:
                return record.eval_loss
        return None

    def train_losses(self) -> list[float]:
        return [r.train_loss for r in self.records]


@dataclass
class LoopRun:
    trace: LoopTrace
    pairs: list[tuple[str, str]]  # (formal, synthetic informal) per batch item
    config: LoopConfig


def detect_plateau(losses: Sequence[float], window: int, epsilon: float) -> int | None:
    """First 1-based step whose trailing `window` losses vary < epsilon."""
    for end in range(window, len(losses) + 1):
        tail = losses[end - window : end]
        if max(tail) - min(tail) < epsilon:
            return end
    return None


def run_loop(
    corpus: Sequence[str], translator: TranslatorPort, cfg: LoopConfig
) -> LoopRun:
    """Run the round-trip loop; returns the trace and captured pairs."""
    if not corpus:
        raise ValidationError("corpus must be non-empty")
    rng = random.Random(cfg.seed)
    corpus = list(corpus)
    order: list[int] = []

    def next_batch() -> list[str]:
        batch = []
        while len(batch) < cfg.batch_size:
            if not order:
                refill = list(range(len(corpus)))
                rng.shuffle(refill)
                order.extend(refill)
            batch.append(corpus[order.pop()])
        return batch

    def call(step: int, fn, *args):
        try:
            return fn(*args)
        except Exception as exc:
            raise TranslatorError(str(exc), step) from exc

    def evaluate(step: int) -> float:
        il = call(step, translator.fl_to_il, corpus)
        generated = call(step, translator.il_to_fl, il)
        return float(call(step, translator.loss, generated, corpus))

    trace = LoopTrace(initial_eval_loss=evaluate(0))
    pairs: list[tuple[str, str]] = []
    train_losses: list[float] = []

    for step in range(1, cfg.max_steps + 1):
        formal = next_batch()
        informal = call(step, translator.fl_to_il, formal)
        generated = call(step, translator.il_to_fl, informal)
        loss = float(call(step, translator.loss, generated, formal))
        call(step, translator.update, loss)

        pairs.extend(zip(formal, informal))
        train_losses.append(loss)
        eval_loss = None
        if step % cfg.eval_every == 0 or step == cfg.max_steps:
            eval_loss = evaluate(step)
        trace.records.append(StepRecord(step, loss, eval_loss))
        if trace.plateau_step is None:
            hit = detect_plateau(train_losses, cfg.plateau_window, cfg.plateau_epsilon)
            if hit is not None:
                trace.plateau_step = hit

    return LoopRun(trace=trace, pairs=pairs, config=cfg)


def export_pairs(run: LoopRun, source: str = "otf") -> list:
    """Materialize the synthetic (formal, informal) batches as pair records."""
    from ..records import PairRecord, pair_content_id

    return [
        PairRecord(
            id=pair_content_id(formal, informal),
            formal=formal,
            informal=informal,
            method="otf",
            source=source,
        )
        for formal, informal in run.pairs
    ]


def write_trace_jsonl(trace: LoopTrace, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for record in trace.records:
            fh.write(
                json.dumps(
                    {
                        "step": record.step,
                        "train_loss": record.train_loss,
                        "eval_loss": record.eval_loss,
                    }
                )
                + "\n"
            )


def write_trace_csv(trace: LoopTrace, path: str | Path) -> None:
    lines = ["step,train_loss,eval_loss"]
    for record in trace.records:
        eval_part = "" if record.eval_loss is None else repr(record.eval_loss)
        lines.append(f"{record.step},{record.train_loss!r},{eval_part}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_loss_svg(trace: LoopTrace, path: str | Path, width: int = 640, height: int = 320) -> None:
    """Dependency-free SVG polyline of the train-loss curve."""
    losses = trace.train_losses()
    if not losses:
        Path(path).write_text("<svg xmlns='http://www.w3.org/2000/svg'/>", encoding="utf-8")
        return
    lo, hi = min(losses), max(losses)
    span = (hi - lo) or 1.0
    margin = 30
    points = []
    for i, loss in enumerate(losses):
        x = margin + (width - 2 * margin) * (i / max(1, len(losses) - 1))
        y = height - margin - (height - 2 * margin) * ((loss - lo) / span)
        points.append(f"{x:.1f},{y:.1f}")
    svg = (
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}'>"
        f"<rect width='100%' height='100%' fill='white'/>"
        f"<polyline fill='none' stroke='steelblue' stroke-width='1.5' "
        f"points='{' '.join(points)}'/>"
        f"<text x='{margin}' y='{margin - 10}' font-size='12'>"
        f"train loss: {losses[0]:.4f} -> {losses[-1]:.4f}</text>"
        "</svg>"
    )
    Path(path).write_text(svg, encoding="utf-8")
