"""Secondary acceptance: fine-tuned beats base by a clear margin, on CPU.

On the bundled 200-pair fixture (160 train / 40 held out, produced by the
corpus toolkit's own extract -> rule-informalize -> assemble -> split chain),
the fine-tuned model's eval loss must undercut the un-fine-tuned base by at
least 20% relative, inside a 15-minute CPU budget. Only the ordering and the
desk-scale margin are asserted; full-scale absolute losses are not targets.
"""

from __future__ import annotations

import time

from pairtune.cli import main as cli_main
from pairtune.data import WordVocab, load_pairs
from pairtune.evaluate import EvalReport, evaluate
from pairtune.model import build_model
from pairtune.recipe import TrainRecipe
from pairtune.train import finetune, load_checkpoint


def test_finetune_ordering_with_margin(tmp_path, train_path, test_path):
    started = time.perf_counter()

    vocab = WordVocab.from_pairs(load_pairs(train_path) + load_pairs(test_path))
    recipe = TrainRecipe(
        base_model="tiny-causal",
        epochs=20,
        learning_rate=3e-3,
        optimizer="adafactor",
        seed=0,
        max_sequence_length=96,
        batch_size=16,
    )
    ckpt = finetune(train_path, recipe, tmp_path / "ckpt", vocab=vocab)
    tuned, vocab_loaded, recipe_loaded = load_checkpoint(ckpt)
    base = build_model("tiny-causal", vocab_loaded, seed=recipe_loaded.seed)

    base_loss = evaluate(base, test_path, vocab_loaded, recipe.max_sequence_length)
    tuned_loss = evaluate(tuned, test_path, vocab_loaded, recipe.max_sequence_length)

    margin = (base_loss - tuned_loss) / base_loss
    assert tuned_loss < base_loss
    assert margin >= 0.20, f"relative margin {margin:.2%} under the 20% bar"

    report = EvalReport(
        rows={
            "tiny-causal (no fine-tuning)": base_loss,
            "pair fixture (160 train)": tuned_loss,
        }
    )
    report.write(tmp_path / "report.json", tmp_path / "report.md")

    elapsed = time.perf_counter() - started
    assert elapsed < 900, f"secondary run took {elapsed:.0f}s (budget 900s)"
    print(
        f"\nSECONDARY ACCEPTANCE PASS: base {base_loss:.4f} -> tuned "
        f"{tuned_loss:.4f} (margin {margin:.1%}, {elapsed:.0f}s)"
    )


def test_cli_round_trip(tmp_path, train_path, test_path):
    ckpt = tmp_path / "ckpt"
    assert cli_main([
        "finetune", "--corpus", train_path, "--out-dir", str(ckpt),
        "--base-model", "tiny-causal", "--epochs", "1",
        "--learning-rate", "3e-3", "--max-sequence-length", "96",
    ]) == 0
    report = tmp_path / "report.json"
    assert cli_main([
        "evaluate", "--checkpoint", str(ckpt), "--test", test_path,
        "--report", str(report), "--markdown", str(tmp_path / "report.md"),
    ]) == 0
    import json

    rows = json.loads(report.read_text())["rows"]
    assert len(rows) == 2  # base row + fine-tuned row
    assert any("no fine-tuning" in k for k in rows)
