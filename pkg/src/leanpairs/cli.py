"""Single command-line entry point wiring the pipeline stages together.

Subcommands: extract, rule-informalize, distill, assemble, stats, split,
align, otf-sim. Every run writes one manifest with input/output hashes so
identical inputs and seeds can be checked to reproduce identical outputs.

Exit codes are a stable scripting contract: 0 success, 1 usage error,
2 data error, 3 teacher/endpoint error.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import __version__
from .assemble import assemble, compute_stats, render_stats_table, split
from .errors import (
    AuthError,
    EmptyInformalError,
    EndpointError,
    LeanpairsError,
    RatioError,
    SchemaError,
    ShotCountError,
    TeacherFormatError,
    TokenizerLoadError,
    ValidationError,
)
from .informalize import informalize_proof, load_template_table
from .leanparse import extract_theorems
from .manifest import RunManifest
from .otf import (
    IdentityTranslator,
    LoopConfig,
    SubstitutionCipherTranslator,
    export_pairs,
    load_bundled_corpus,
    run_loop,
    write_loss_svg,
    write_trace_csv,
    write_trace_jsonl,
)
from .prompts import PromptSpec, load_default_shots, load_shots_file
from .proofstates import align_tactics_to_lines, load_states
from .records import (
    GENERATION_METHODS,
    PairRecord,
    TheoremRecord,
    pair_content_id,
    read_jsonl,
    write_jsonl,
)
from .teacher import TeacherClient, TeacherConfig
from .tokenizer import BpeTokenizer

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ENDPOINT = 3


class CliUsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage problems, not argparse's 2
        raise CliUsageError(message)


def _manifest_path(args, default_for: str) -> Path:
    if getattr(args, "manifest", None):
        return Path(args.manifest)
    return Path(default_for + ".manifest.json")


def _add_tokenizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vocab", help="vocab JSON file (token -> id); default: bundled reference")
    p.add_argument("--merges", help="merges text file; default: bundled reference")


def _load_tokenizer(args) -> BpeTokenizer:
    if args.vocab or args.merges:
        if not (args.vocab and args.merges):
            raise CliUsageError("--vocab and --merges must be given together")
        return BpeTokenizer.from_files(args.vocab, args.merges)
    return BpeTokenizer.reference()


def _read_theorems(path: str) -> list[TheoremRecord]:
    return [TheoremRecord.from_json_dict(obj, lineno) for lineno, obj in read_jsonl(path)]


# ---------------------------------------------------------------- extract


def cmd_extract(args, argv: list[str]) -> int:
    input_dir = Path(args.input_dir)
    if not input_dir.is_dir():
        raise SchemaError(f"--input-dir {input_dir} is not a directory")
    manifest = RunManifest(command=argv, tool_version=__version__)

    files = sorted(p for p in input_dir.rglob("*") if p.is_file())
    records = []
    warnings: list[str] = []
    keyword_counts: dict[str, int] = {}
    unreadable: list[str] = []
    for path in files:
        rel = path.relative_to(input_dir).as_posix()
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            unreadable.append(f"{rel}: {exc}")
            continue
        manifest.add_input(path)
        result = extract_theorems(text, rel, fold_ascii=args.fold_ascii)
        records.extend(result.records)
        warnings.extend(result.warnings)
        for kw, count in result.keyword_counts.items():
            keyword_counts[kw] = keyword_counts.get(kw, 0) + count

    records.sort(key=lambda r: (r.source_file, r.line_start))
    write_jsonl(args.out, (r.to_json_dict() for r in records))

    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for failure in unreadable:
        print(f"error: unreadable file {failure}", file=sys.stderr)
    print(
        f"extracted {len(records)} declarations "
        f"({json.dumps(keyword_counts, sort_keys=True)}), "
        f"{len(warnings)} warnings",
        file=sys.stderr,
    )

    manifest.config = {
        "input_dir": str(input_dir),
        "fold_ascii": args.fold_ascii,
        "strict": args.strict,
        "keyword_counts": keyword_counts,
        "warnings": len(warnings),
        "unreadable_files": len(unreadable),
    }
    manifest.add_output(args.out)
    manifest.write(_manifest_path(args, args.out))
    if unreadable and args.strict:
        return EXIT_DATA
    return EXIT_OK


# ------------------------------------------------------- rule-informalize


def cmd_rule_informalize(args, argv: list[str]) -> int:
    manifest = RunManifest(command=argv, tool_version=__version__)
    manifest.add_input(args.in_path)
    table = None
    if args.templates:
        table = load_template_table(args.templates)
        manifest.add_input(args.templates)
    tokenizer = _load_tokenizer(args)

    rows = []
    low_quality = 0
    for record in _read_theorems(args.in_path):
        pair, classified = informalize_proof(record, table)
        pair.tokens_formal = tokenizer.count(pair.formal)
        pair.tokens_informal = tokenizer.count(pair.informal)
        low_quality += int(pair.low_quality)
        row = pair.to_json_dict()
        rows.append(row)
    write_jsonl(args.out, rows)
    print(
        f"informalized {len(rows)} proofs ({low_quality} low-quality)",
        file=sys.stderr,
    )

    manifest.config = {
        "templates": args.templates or "builtin",
        "low_quality": low_quality,
    }
    manifest.add_output(args.out)
    manifest.write(_manifest_path(args, args.out))
    return EXIT_OK


# ---------------------------------------------------------------- distill


def _teacher_config(args) -> TeacherConfig:
    # precedence: CLI flag > config file > built-in default
    base = TeacherConfig.from_file(args.teacher_config) if args.teacher_config else TeacherConfig()
    overrides = {}
    if args.model is not None:
        overrides["model_name"] = args.model
    if args.temperature is not None:
        overrides["temperature"] = args.temperature
    if args.max_parallel is not None:
        overrides["max_parallel"] = args.max_parallel
    if args.endpoint_url is not None:
        overrides["endpoint_url"] = args.endpoint_url
    if not overrides:
        return base
    merged = base.to_json_dict()
    merged.update(overrides)
    merged["price_per_1k_input_tokens"] = Decimal(merged["price_per_1k_input_tokens"])
    merged["price_per_1k_output_tokens"] = Decimal(merged["price_per_1k_output_tokens"])
    return TeacherConfig(**merged)


def cmd_distill(args, argv: list[str]) -> int:
    manifest = RunManifest(command=argv, tool_version=__version__)
    manifest.add_input(args.in_path)
    cfg = _teacher_config(args)
    tokenizer = _load_tokenizer(args)
    budget = None
    if args.budget is not None:
        try:
            budget = Decimal(args.budget)
        except InvalidOperation as exc:
            raise CliUsageError(f"--budget {args.budget!r} is not a decimal") from exc

    specs: list[PromptSpec] = []
    targets: list[dict] = []  # parallel metadata for building pairs
    if args.mode == "full":
        shots = tuple(load_shots_file(args.shots) if args.shots else load_default_shots())
        if args.shots:
            manifest.add_input(args.shots)
        for record in _read_theorems(args.in_path):
            specs.append(
                PromptSpec(
                    mode="full_proof_6shot",
                    target=record,
                    shots=shots,
                    fold_ascii=args.fold_ascii,
                )
            )
            targets.append(
                {
                    "formal": record.formal_text,
                    "source": f"{record.source_file}:{record.line_start}",
                }
            )
    else:
        statements: dict[str, str] = {}
        if args.theorems:
            manifest.add_input(args.theorems)
            for record in _read_theorems(args.theorems):
                statements[record.id] = record.statement
                statements.setdefault(record.name, record.statement)
        allowlist: set[str] | None = None
        if args.allowlist:
            manifest.add_input(args.allowlist)
            allowlist = {
                line.strip()
                for line in Path(args.allowlist).read_text(encoding="utf-8").splitlines()
                if line.strip()
            }
        loaded = load_states(args.in_path)
        for warning in loaded.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        for t in loaded.tuples:
            if allowlist is not None and t.theorem_id not in allowlist:
                continue
            statement = statements.get(t.theorem_id, t.theorem_id)
            specs.append(
                PromptSpec(mode="tactic_0shot", target=t, theorem_statement=statement)
            )
            targets.append({"formal": t.tactic, "source": f"{t.theorem_id}#{t.index}"})

    client = TeacherClient(cfg, cache_dir=args.cache_dir, token_counter=tokenizer.count)
    items, ledger = client.informalize_batch(specs, budget=budget)

    rows = []
    quarantined = []
    for item, meta in zip(items, targets):
        if item.ok:
            informal = item.response.parsed[1]
            pair = PairRecord(
                id=pair_content_id(meta["formal"], informal),
                formal=meta["formal"],
                informal=informal,
                method=item.method,
                source=meta["source"],
                tokens_formal=tokenizer.count(meta["formal"]),
                tokens_informal=tokenizer.count(informal),
            )
            rows.append(pair.to_json_dict())
        else:
            quarantined.append(
                {
                    "source": meta["source"],
                    "error": item.error or "unparseable response",
                    "raw_response": item.response.raw_text if item.response else None,
                }
            )
    write_jsonl(args.out, rows)
    quarantine_path = args.quarantine or f"{args.out}.quarantine.jsonl"
    write_jsonl(quarantine_path, quarantined)
    ledger_path = args.ledger_out or f"{args.out}.ledger.json"
    Path(ledger_path).write_text(
        json.dumps(ledger.to_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(
        f"distilled {len(rows)} pairs, {len(quarantined)} failures, "
        f"estimated cost {ledger.total_cost}",
        file=sys.stderr,
    )

    manifest.config = {
        "mode": args.mode,
        "teacher": cfg.to_json_dict(),
        "budget": str(budget) if budget is not None else None,
        "cache_dir": str(args.cache_dir) if args.cache_dir else None,
    }
    for out in (args.out, quarantine_path, ledger_path):
        manifest.add_output(out)
    manifest.write(_manifest_path(args, args.out))
    return EXIT_OK


# --------------------------------------------------------------- assemble


def _tolerant_rows(path: str):
    """Yield (obj-or-None, raw, reason) per line; bad JSON becomes quarantine."""
    with Path(path).open("r", encoding="utf-8") as fh:
        for raw in fh:
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                yield None, raw, f"invalid JSON: {exc.msg}"
                continue
            if not isinstance(obj, dict):
                yield None, raw, "not a JSON object"
                continue
            yield obj, raw, None


def cmd_assemble(args, argv: list[str]) -> int:
    manifest = RunManifest(command=argv, tool_version=__version__)
    tokenizer = _load_tokenizer(args)

    pre_quarantined: list[dict] = []
    streams = []
    for entry in args.inputs:
        if "=" in entry:
            method, _, path = entry.partition("=")
            if method not in GENERATION_METHODS:
                raise CliUsageError(
                    f"unknown method {method!r} in input {entry!r} "
                    f"(expected one of {', '.join(GENERATION_METHODS)})"
                )
        else:
            method, path = "external", entry
        manifest.add_input(path)
        rows = []
        for obj, raw, reason in _tolerant_rows(path):
            if reason is not None:
                pre_quarantined.append({"raw": raw, "reason": reason, "input": path})
            else:
                rows.append(obj)
        streams.append((method, rows))

    result = assemble(streams, tokenizer)
    write_jsonl(args.out, (r.to_json_dict() for r in result.records))

    quarantine_rows = pre_quarantined + [
        {"record": obj, "reason": reason} for obj, reason in result.quarantined
    ]
    quarantine_path = args.quarantine or f"{args.out}.quarantine.jsonl"
    write_jsonl(quarantine_path, quarantine_rows)

    stats_path = args.stats_out or f"{args.out}.stats.json"
    Path(stats_path).write_text(
        json.dumps(result.stats.to_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(render_stats_table(result.stats))

    manifest.config = {"inputs": list(args.inputs)}
    for out in (args.out, quarantine_path, stats_path):
        manifest.add_output(out)
    manifest.write(_manifest_path(args, args.out))
    return EXIT_OK


def cmd_stats(args, argv: list[str]) -> int:
    manifest = RunManifest(command=argv, tool_version=__version__)
    manifest.add_input(args.in_path)
    records = [PairRecord.from_json_dict(obj, lineno) for lineno, obj in read_jsonl(args.in_path)]
    if args.recount:
        tokenizer = _load_tokenizer(args)
        for record in records:
            record.tokens_formal = tokenizer.count(record.formal)
            record.tokens_informal = tokenizer.count(record.informal)
    stats = compute_stats(records)
    print(render_stats_table(stats))
    manifest.config = {"recount": args.recount}
    if args.out:
        Path(args.out).write_text(
            json.dumps(stats.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        manifest.add_output(args.out)
        manifest.write(_manifest_path(args, args.out))
    else:
        manifest.write(_manifest_path(args, args.in_path + ".stats"))
    return EXIT_OK


def cmd_split(args, argv: list[str]) -> int:
    manifest = RunManifest(command=argv, tool_version=__version__)
    manifest.add_input(args.in_path)
    try:
        ratios = tuple(float(x) for x in args.ratios.split(","))
    except ValueError as exc:
        raise CliUsageError(f"--ratios {args.ratios!r} is not a comma-separated list") from exc
    if len(ratios) != 3:
        raise CliUsageError("--ratios needs exactly three comma-separated values")

    records = [PairRecord.from_json_dict(obj, lineno) for lineno, obj in read_jsonl(args.in_path)]
    train, val, test = split(records, ratios, args.seed)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, bucket in (("train", train), ("val", val), ("test", test)):
        path = out_dir / f"{name}.jsonl"
        write_jsonl(path, (r.to_json_dict() for r in bucket))
        manifest.add_output(path)
    print(
        f"split {len(records)} pairs into {len(train)}/{len(val)}/{len(test)}",
        file=sys.stderr,
    )

    manifest.config = {"ratios": list(ratios), "seed": args.seed}
    manifest.write(
        Path(args.manifest) if args.manifest else out_dir / "split.manifest.json"
    )
    return EXIT_OK


# ------------------------------------------------------------------ align


def cmd_align(args, argv: list[str]) -> int:
    manifest = RunManifest(command=argv, tool_version=__version__)
    manifest.add_input(args.states)
    manifest.add_input(args.informal)

    informal_by_theorem: dict[str, str] = {}
    for lineno, obj in read_jsonl(args.informal):
        if "theorem_id" not in obj or "informal_proof" not in obj:
            raise SchemaError("need theorem_id and informal_proof fields", lineno)
        informal_by_theorem[str(obj["theorem_id"])] = str(obj["informal_proof"])

    loaded = load_states(args.states)
    for warning in loaded.warnings:
        print(f"warning: {warning}", file=sys.stderr)

    rows = []
    skipped = 0
    for theorem_id, steps in loaded.by_theorem().items():
        informal = informal_by_theorem.get(theorem_id)
        if informal is None:
            skipped += len(steps)
            continue
        aligned = align_tactics_to_lines(sorted(steps, key=lambda t: t.index), informal)
        rows.extend(a.to_json_dict() for a in aligned)
    write_jsonl(args.out, rows)
    print(f"aligned {len(rows)} tactics ({skipped} without informal proofs)", file=sys.stderr)

    manifest.add_output(args.out)
    manifest.write(_manifest_path(args, args.out))
    return EXIT_OK


# ---------------------------------------------------------------- otf-sim


def cmd_otf_sim(args, argv: list[str]) -> int:
    manifest = RunManifest(command=argv, tool_version=__version__)
    if args.corpus:
        manifest.add_input(args.corpus)
        corpus = [
            line
            for line in Path(args.corpus).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    else:
        corpus = load_bundled_corpus()

    cfg = LoopConfig(
        batch_size=args.batch_size,
        max_steps=args.steps,
        eval_every=args.eval_every,
        seed=args.seed,
        plateau_window=args.plateau_window,
        plateau_epsilon=args.plateau_epsilon,
    )
    if args.translator == "identity":
        translator = IdentityTranslator()
    else:
        translator = SubstitutionCipherTranslator(corpus, seed=args.seed)

    run = run_loop(corpus, translator, cfg)
    write_trace_jsonl(run.trace, args.out_trace)
    manifest.add_output(args.out_trace)
    if args.out_pairs:
        write_jsonl(args.out_pairs, (p.to_json_dict() for p in export_pairs(run)))
        manifest.add_output(args.out_pairs)
    if args.plot:
        write_trace_csv(run.trace, f"{args.plot}.csv")
        write_loss_svg(run.trace, f"{args.plot}.svg")
        manifest.add_output(f"{args.plot}.csv")
        manifest.add_output(f"{args.plot}.svg")

    trace = run.trace
    print(
        f"ran {len(trace.records)} steps; initial eval {trace.initial_eval_loss:.4f}, "
        f"final eval {trace.final_eval_loss:.4f}, plateau at "
        f"{trace.plateau_step if trace.plateau_step is not None else '-'}",
        file=sys.stderr,
    )

    manifest.config = {"loop": cfg.to_json_dict(), "translator": args.translator}
    manifest.write(_manifest_path(args, args.out_trace))
    return EXIT_OK


# ------------------------------------------------------------------ wiring


def build_parser() -> Parser:
    parser = Parser(prog="leanpairs", description=__doc__)
    parser.add_argument("--version", action="version", version=f"leanpairs {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("extract", help="mine declarations from a directory of Lean sources")
    p.add_argument("--input-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true", help="unreadable files fail the run")
    p.add_argument("--fold-ascii", action="store_true", help="fold Unicode to ASCII display form")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("rule-informalize", help="template informalization of extracted theorems")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--templates", help="JSON file overriding kind -> template")
    _add_tokenizer_flags(p)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_rule_informalize)

    p = sub.add_parser("distill", help="teacher-LLM informalization (full-proof or per-tactic)")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--mode", choices=("full", "tactic"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--shots", help="shots JSON (mode=full); default: bundled six")
    p.add_argument("--teacher-config", help="teacher config JSON file")
    p.add_argument("--cache-dir", help="response cache directory")
    p.add_argument("--budget", help="stop issuing requests once estimated cost reaches this")
    p.add_argument("--theorems", help="theorem JSONL for statement lookup (mode=tactic)")
    p.add_argument("--allowlist", help="file of theorem ids to include (mode=tactic)")
    p.add_argument("--fold-ascii", action="store_true")
    p.add_argument("--model", help="override teacher model name")
    p.add_argument("--temperature", type=float, help="override sampling temperature")
    p.add_argument("--max-parallel", type=int, help="override request concurrency")
    p.add_argument("--endpoint-url", help="override endpoint URL")
    p.add_argument("--ledger-out")
    p.add_argument("--quarantine")
    _add_tokenizer_flags(p)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("assemble", help="merge tagged pair streams into one corpus")
    p.add_argument("inputs", nargs="+", metavar="[METHOD=]PATH")
    p.add_argument("--out", required=True)
    p.add_argument("--quarantine")
    p.add_argument("--stats-out")
    _add_tokenizer_flags(p)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("stats", help="report per-method corpus statistics")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", help="also write machine-readable JSON here")
    p.add_argument("--recount", action="store_true", help="recompute token counts")
    _add_tokenizer_flags(p)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("split", help="grouped train/val/test split")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--ratios", default="0.8,0.1,0.1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("align", help="pair proof-state tactics with informal proof lines")
    p.add_argument("--states", required=True)
    p.add_argument("--informal", required=True, help="JSONL of {theorem_id, informal_proof}")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("otf-sim", help="run the round-trip loop on a formal corpus")
    p.add_argument("--corpus", help="text file, one formal sentence per line; default: bundled")
    p.add_argument("--translator", choices=("toy", "identity"), default="toy")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--eval-every", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plateau-window", type=int, default=25)
    p.add_argument("--plateau-epsilon", type=float, default=1e-4)
    p.add_argument("--out-trace", required=True)
    p.add_argument("--out-pairs")
    p.add_argument("--plot", help="prefix for loss-curve CSV and SVG")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_otf_sim)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, argv)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ShotCountError, ValidationError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SchemaError, TokenizerLoadError, RatioError, EmptyInformalError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AuthError, EndpointError, TeacherFormatError) as exc:
        print(f"endpoint error: {exc}", file=sys.stderr)
        return EXIT_ENDPOINT
    except LeanpairsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
