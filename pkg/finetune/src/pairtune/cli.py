"""pairtune CLI: fine-tune on a pair corpus and report evaluation loss."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import PairtuneError
from .evaluate import EvalReport, evaluate
from .model import build_model
from .recipe import TrainRecipe
from .train import finetune, load_checkpoint


def _recipe_from_args(args) -> TrainRecipe:
    base = TrainRecipe.from_file(args.recipe) if args.recipe else TrainRecipe()
    overrides = {}
    for name in ("base_model", "epochs", "learning_rate", "optimizer", "seed",
                 "max_sequence_length", "batch_size"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if not overrides:
        return base
    merged = base.to_json_dict()
    merged.update(overrides)
    return TrainRecipe(**merged)


def cmd_finetune(args) -> int:
    recipe = _recipe_from_args(args)
    out = finetune(args.corpus, recipe, args.out_dir)
    print(f"saved checkpoint to {out}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    model, vocab, recipe = load_checkpoint(args.checkpoint)
    report = EvalReport()
    if not args.no_base:
        base = build_model(recipe.base_model, vocab, recipe.seed)
        report.rows[f"{recipe.base_model} (no fine-tuning)"] = evaluate(
            base, args.test, vocab, recipe.max_sequence_length
        )
    label = args.label or Path(args.checkpoint).name
    report.rows[label] = evaluate(model, args.test, vocab, recipe.max_sequence_length)
    report.write(args.report, args.markdown)
    print(report.to_markdown(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairtune", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("finetune", help="train on a pair corpus")
    p.add_argument("--corpus", required=True, help="pair JSONL (informal -> formal)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--recipe", help="recipe JSON; defaults are the stock setup")
    p.add_argument("--base-model")
    p.add_argument("--epochs", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--optimizer", choices=("adafactor", "adamw"))
    p.add_argument("--seed", type=int)
    p.add_argument("--max-sequence-length", dest="max_sequence_length", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("evaluate", help="report eval loss (base row included)")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--test", required=True, help="held-out pair JSONL")
    p.add_argument("--report", required=True, help="output JSON path")
    p.add_argument("--markdown", help="also write a markdown table here")
    p.add_argument("--label", help="row label for the fine-tuned model")
    p.add_argument("--no-base", action="store_true", help="skip the base-model row")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PairtuneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
