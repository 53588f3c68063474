"""Files-in/files-out command line interface.

All randomness flows from a single --seed (default 0, overridable via
CODITKIT_SEED); every command writes its primary output atomically plus a
<output>.manifest.json recording the seed, version, and the under-specified
choices baked into this run. Exit codes: 0 success, 2 usage error, 3 data
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .edits import (
    BACKEND_LONGEST_MATCH,
    BACKENDS,
    POLICIES,
    POLICY_LEFTMOST,
    apply_plan,
    check_consistency,
    parse_plan,
)
from .errors import CoditkitError, LengthMismatch, ParseError
from .jsonio import read_jsonl, write_json_atomic, write_jsonl_atomic
from .metrics import METRIC_NAMES, METRIC_VARIANTS, bootstrap_test, evaluate_corpus
from .noising import (
    NoiseKind,
    NoiseSpan,
    NoiseSpec,
    SpanStats,
    compute_span_stats,
    example_rng,
    length_filter,
    make_pretrain_example,
)
from .rerank import Candidate, DIRECTIONS, rerank as rerank_candidates
from .tasks import TASKS, build_task_input, copy_rate, extract_target
from .tokens import Tokenizer, load_tokenizer, sanitize_text, tokenize
from .rerank import wrap_generation_as_edit_output

SAMPLING_DECISIONS = {
    "span_length_distribution": "geometric with mean mean_span_len, clamped so one token survives",
    "span_count_distribution": "poisson with mean mean_spans_per_seq",
    "span_placement": "uniform over non-overlapping arrangements (stars and bars)",
}

RERANK_DECISIONS = {
    "normalization": "sum of token log-probabilities divided by token count",
    "tie_break": "original beam order (stable sort)",
}


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


def _load_tokenizer(args) -> Tokenizer:
    if getattr(args, "vocab", None):
        return load_tokenizer(args.vocab, getattr(args, "merges", None))
    return Tokenizer.whitespace()


def _write_manifest(output: str, command: str, seed: int | None = None, **extra) -> None:
    manifest = {"command": command, "version": __version__}
    if seed is not None:
        manifest["seed"] = seed
    manifest.update(extra)
    write_json_atomic(str(output) + ".manifest.json", manifest)


def _text_tokens(raw: str, tok: Tokenizer) -> list[str]:
    return tokenize(sanitize_text(raw), tok)


# ---------------------------------------------------------------- span-stats

def _cmd_span_stats(args) -> None:
    tok = _load_tokenizer(args)
    pairs = []
    for rec in read_jsonl(args.pairs):
        pairs.append((_text_tokens(str(rec["source"]), tok), _text_tokens(str(rec["target"]), tok)))
    stats = compute_span_stats(pairs, backend=args.backend)
    write_json_atomic(args.output, stats.to_dict())
    _write_manifest(args.output, "span-stats", backend=args.backend, pairs=len(pairs))


# --------------------------------------------------------------- gen-pretrain

def _read_corpus(path: str, tok: Tokenizer) -> list[tuple[str, list[str]]]:
    docs: list[tuple[str, list[str]]] = []
    if path.endswith(".jsonl"):
        for i, rec in enumerate(read_jsonl(path)):
            docs.append((str(rec.get("id", i)), _text_tokens(str(rec["text"]), tok)))
    else:
        with open(path, encoding="utf-8") as f:
            for i, line in enumerate(f):
                docs.append((str(i), _text_tokens(line.rstrip("\n"), tok)))
    return docs


def _load_forced_spec(path: str) -> NoiseSpec:
    with open(path, encoding="utf-8") as f:
        spans = json.load(f)
    return NoiseSpec(tuple(
        NoiseSpan(int(s["start"]), int(s["length"]), NoiseKind(s["kind"])) for s in spans
    ))


def _pretrain_one(item) -> dict:
    seed, index, doc_id, tokens, stats_dict, forced_spans, backend, verify = item
    stats = SpanStats.from_dict(stats_dict)
    spec = None
    if forced_spans is not None:
        spec = NoiseSpec(tuple(NoiseSpan(s, l, NoiseKind(k)) for s, l, k in forced_spans))
    ex = make_pretrain_example(tokens, stats, example_rng(seed, index), doc_id,
                               spec=spec, backend=backend, verify=verify)
    return {"id": ex.id, "corrupted": ex.corrupted, "edit_plan": ex.edit_plan, "target": ex.target}


def _cmd_gen_pretrain(args) -> None:
    tok = _load_tokenizer(args)
    stats = SpanStats.from_dict(json.load(open(args.stats, encoding="utf-8")))
    forced = None
    if args.force_spec:
        forced = [(s.start, s.length, s.kind.value) for s in _load_forced_spec(args.force_spec).spans]
    docs = _read_corpus(args.input, tok)
    items = []
    skipped = 0
    for index, (doc_id, tokens) in enumerate(docs):
        if not length_filter(tokens):
            skipped += 1
            continue
        items.append((args.seed, index, doc_id, tokens, stats.to_dict(), forced,
                      args.backend, args.verify))
    if args.workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            records = list(pool.map(_pretrain_one, items, chunksize=64))
    else:
        records = [_pretrain_one(item) for item in items]
    write_jsonl_atomic(args.output, records)
    _write_manifest(args.output, "gen-pretrain", seed=args.seed, backend=args.backend,
                    examples=len(records), skipped_by_length_filter=skipped,
                    forced_spec=bool(forced), decisions=SAMPLING_DECISIONS)


# --------------------------------------------------------------- gen-finetune

def _cmd_gen_finetune(args) -> None:
    tok = _load_tokenizer(args)
    task = TASKS[args.task]
    records = []
    for i, rec in enumerate(read_jsonl(args.input)):
        tokenized = {f: _text_tokens(str(rec[f]), tok) for f in task.fields}
        model_input = build_task_input(args.task, tokenized)
        target = tokenized[task.reference_field]
        editable = tokenized[task.editable_field]
        records.append({
            "id": str(rec.get("id", i)),
            "input": model_input,
            "target": target,
            "edit_target": wrap_generation_as_edit_output(editable, target, args.backend),
        })
    write_jsonl_atomic(args.output, records)
    _write_manifest(args.output, "gen-finetune", task=args.task, backend=args.backend,
                    examples=len(records))


# ------------------------------------------------------ plan-level commands

def _cmd_parse_plan(args) -> None:
    records = []
    for i, rec in enumerate(read_jsonl(args.input)):
        plan = parse_plan([str(t) for t in rec["plan"]])
        records.append({
            "id": str(rec.get("id", i)),
            "operations": [
                {"kind": op.kind.value, "old": list(op.old), "new": list(op.new)}
                for op in plan.operations
            ],
        })
    write_jsonl_atomic(args.output, records)
    _write_manifest(args.output, "parse-plan", examples=len(records))


def _cmd_apply_plan(args) -> None:
    records = []
    for i, rec in enumerate(read_jsonl(args.input)):
        plan = parse_plan([str(t) for t in rec["plan"]])
        result = apply_plan(plan, [str(t) for t in rec["source"]], args.policy)
        records.append({"id": str(rec.get("id", i)), "result": result})
    write_jsonl_atomic(args.output, records)
    _write_manifest(args.output, "apply-plan", policy=args.policy, examples=len(records))


def _cmd_check_consistency(args) -> None:
    records = []
    consistent = 0
    for i, rec in enumerate(read_jsonl(args.input)):
        source = [str(t) for t in rec["source"]]
        target = [str(t) for t in rec["target"]]
        try:
            plan = parse_plan([str(t) for t in rec["plan"]])
        except CoditkitError:
            report = None
        else:
            report = check_consistency(plan, source, target)
        rec_out = {
            "id": str(rec.get("id", i)),
            "consistent": bool(report and report.consistent),
            "applied_result": report.applied_result if report else None,
            "divergence_index": report.divergence_index if report else None,
        }
        consistent += rec_out["consistent"]
        records.append(rec_out)
    write_jsonl_atomic(args.output, records)
    rate = consistent / len(records) if records else 0.0
    _write_manifest(args.output, "check-consistency", examples=len(records),
                    consistent_rate=rate,
                    decisions={"apply_policy": POLICY_LEFTMOST,
                               "parse_failure": "reported as inconsistent"})


# ------------------------------------------------------------------ evaluate

def _join_predictions(args, tok: Tokenizer):
    """Align predictions to task records by id, keeping task-file order."""
    task = TASKS[args.task]
    preds_by_id: dict[str, list[str]] = {}
    missing_sep = 0
    for i, rec in enumerate(read_jsonl(args.predictions)):
        pred = tokenize(str(rec["prediction"]), tok)
        if args.extract_target:
            extracted = extract_target(pred)
            missing_sep += extracted.missing_separator
            pred = extracted.tokens
        preds_by_id[str(rec.get("id", i))] = pred
    rows = []
    for i, rec in enumerate(read_jsonl(args.input)):
        rec_id = str(rec.get("id", i))
        if rec_id not in preds_by_id:
            raise LengthMismatch(f"no prediction for task example {rec_id!r}", 0, 1)
        rows.append((
            rec_id,
            preds_by_id.pop(rec_id),
            _text_tokens(str(rec[task.reference_field]), tok),
            _text_tokens(str(rec[task.editable_field]), tok),
        ))
    if preds_by_id:
        stray = next(iter(preds_by_id))
        raise LengthMismatch(f"prediction {stray!r} has no task example", len(preds_by_id), 0)
    return rows, missing_sep


def _cmd_evaluate(args) -> None:
    tok = _load_tokenizer(args)
    names = tuple(args.metrics.split(","))
    rows, missing_sep = _join_predictions(args, tok)
    report = evaluate_corpus(
        [r[1] for r in rows], [r[2] for r in rows], [r[3] for r in rows], names)
    out = report.to_dict()
    out["ids"] = [r[0] for r in rows]
    write_json_atomic(args.output, out)
    _write_manifest(args.output, "evaluate", task=args.task, metrics=list(names),
                    examples=report.count, missing_separator=missing_sep,
                    decisions={k: METRIC_VARIANTS[k] for k in (*names, "meteor") if k in METRIC_VARIANTS})


def _cmd_copy_rate(args) -> None:
    tok = _load_tokenizer(args)
    rows, missing_sep = _join_predictions(args, tok)
    rate = copy_rate([r[1] for r in rows], [r[3] for r in rows])
    write_json_atomic(args.output, {"copy_rate": rate, "count": len(rows)})
    _write_manifest(args.output, "copy-rate", task=args.task, examples=len(rows),
                    missing_separator=missing_sep,
                    decisions={"editable_portion": TASKS[args.task].editable_field})


# -------------------------------------------------------------------- rerank

def _cmd_rerank(args) -> None:
    records = []
    for i, rec in enumerate(read_jsonl(args.input)):
        candidates = [
            Candidate(
                tokens=[str(t) for t in c["tokens"]],
                own_logprob=float(c["own_logprob"]),
                own_length=int(c["own_length"]),
                cross_logprob=None if c.get("cross_logprob") is None else float(c["cross_logprob"]),
                cross_length=None if c.get("cross_length") is None else int(c["cross_length"]),
            )
            for c in rec["candidates"]
        ]
        result = rerank_candidates(candidates, args.direction)
        records.append({
            "id": str(rec.get("id", i)),
            "candidates": [
                {
                    "tokens": rc.candidate.tokens,
                    "own_logprob": rc.candidate.own_logprob,
                    "own_length": rc.candidate.own_length,
                    "cross_logprob": rc.candidate.cross_logprob,
                    "cross_length": rc.candidate.cross_length,
                    "combined_score": rc.combined_score,
                    "beam_rank": rc.beam_rank,
                }
                for rc in result.ranked
            ],
        })
    write_jsonl_atomic(args.output, records)
    _write_manifest(args.output, "rerank", direction=args.direction, examples=len(records),
                    decisions=RERANK_DECISIONS)


# -------------------------------------------------------------- significance

def _cmd_significance(args) -> None:
    def scores(path: str) -> list[float]:
        with open(path, encoding="utf-8") as f:
            report = json.load(f)
        per_example = report.get("per_example", {})
        if args.metric not in per_example:
            raise ParseError(f"{path}: no per-example scores for metric {args.metric!r}")
        return [float(x) for x in per_example[args.metric]]

    result = bootstrap_test(scores(args.report_a), scores(args.report_b),
                            iterations=args.iterations,
                            rng=np.random.default_rng(args.seed))
    out = result.to_dict()
    out["metric"] = args.metric
    write_json_atomic(args.output, out)
    _write_manifest(args.output, "significance", seed=args.seed, metric=args.metric,
                    decisions={"p_value": "doubled fraction of sign flips, clamped to [0, 1]"})


# ----------------------------------------------------------------- arg setup

def _add_common(p: argparse.ArgumentParser, tokenizer: bool = False) -> None:
    p.add_argument("--output", "-o", required=True, help="output file")
    if tokenizer:
        p.add_argument("--vocab", help="vocabulary file (one token per line)")
        p.add_argument("--merges", help="merges file (enables the bpe tokenizer)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coditkit",
                                     description="Edit-plan data pipeline and evaluation toolkit")
    parser.add_argument("--version", action="version", version=f"coditkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("span-stats", help="collect edit statistics from (source, target) pairs")
    p.add_argument("--pairs", required=True, help="JSONL with source/target raw text")
    p.add_argument("--backend", choices=BACKENDS, default=BACKEND_LONGEST_MATCH)
    _add_common(p, tokenizer=True)
    p.set_defaults(func=_cmd_span_stats)

    p = sub.add_parser("gen-pretrain", help="corrupt a corpus into pretraining triples")
    p.add_argument("--input", required=True, help="text (one doc per line) or JSONL with id/text")
    p.add_argument("--stats", required=True, help="span statistics JSON")
    p.add_argument("--seed", type=int, default=_env_int("CODITKIT_SEED", 0))
    p.add_argument("--workers", type=int, default=_env_int("CODITKIT_WORKERS", 1))
    p.add_argument("--backend", choices=BACKENDS, default=BACKEND_LONGEST_MATCH)
    p.add_argument("--force-spec", help="JSON list of spans to apply instead of sampling")
    p.add_argument("--verify", action="store_true",
                   help="check the reconstruction invariant for every example")
    _add_common(p, tokenizer=True)
    p.set_defaults(func=_cmd_gen_pretrain)

    p = sub.add_parser("gen-finetune", help="build fine-tuning inputs for a downstream task")
    p.add_argument("--task", choices=sorted(TASKS), required=True)
    p.add_argument("--input", required=True, help="task JSONL with raw-text fields")
    p.add_argument("--backend", choices=BACKENDS, default=BACKEND_LONGEST_MATCH)
    _add_common(p, tokenizer=True)
    p.set_defaults(func=_cmd_gen_finetune)

    p = sub.add_parser("parse-plan", help="parse serialized plans into operations")
    p.add_argument("--input", required=True, help="JSONL with plan token lists")
    _add_common(p)
    p.set_defaults(func=_cmd_parse_plan)

    p = sub.add_parser("apply-plan", help="apply serialized plans to source sequences")
    p.add_argument("--input", required=True, help="JSONL with source/plan token lists")
    p.add_argument("--policy", choices=POLICIES, default=POLICY_LEFTMOST)
    _add_common(p)
    p.set_defaults(func=_cmd_apply_plan)

    p = sub.add_parser("check-consistency", help="check plans against targets")
    p.add_argument("--input", required=True, help="JSONL with source/plan/target token lists")
    _add_common(p)
    p.set_defaults(func=_cmd_check_consistency)

    p = sub.add_parser("evaluate", help="score predictions against a task file")
    p.add_argument("--task", choices=sorted(TASKS), required=True)
    p.add_argument("--input", required=True, help="task JSONL")
    p.add_argument("--predictions", required=True, help="JSONL with id/prediction")
    p.add_argument("--metrics", default=",".join(METRIC_NAMES))
    p.add_argument("--extract-target", action="store_true",
                   help="take the part of each prediction after the first <s>")
    _add_common(p, tokenizer=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("copy-rate", help="fraction of predictions copying the editable input")
    p.add_argument("--task", choices=sorted(TASKS), required=True)
    p.add_argument("--input", required=True, help="task JSONL")
    p.add_argument("--predictions", required=True, help="JSONL with id/prediction")
    p.add_argument("--extract-target", action="store_true")
    _add_common(p, tokenizer=True)
    p.set_defaults(func=_cmd_copy_rate)

    p = sub.add_parser("rerank", help="rerank candidate lists with combined normalized scores")
    p.add_argument("--input", required=True, help="candidate JSONL")
    p.add_argument("--direction", choices=DIRECTIONS, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_rerank)

    p = sub.add_parser("significance", help="paired bootstrap test between two evaluation reports")
    p.add_argument("--report-a", required=True)
    p.add_argument("--report-b", required=True)
    p.add_argument("--metric", choices=METRIC_NAMES, required=True)
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--seed", type=int, default=_env_int("CODITKIT_SEED", 0))
    _add_common(p)
    p.set_defaults(func=_cmd_significance)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CoditkitError as e:
        print(json.dumps({"error": e.payload()}, sort_keys=True), file=sys.stderr)
        return 3
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(json.dumps({"error": {"code": "data-error", "message": str(e)}}, sort_keys=True),
              file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
