#!/usr/bin/env python3
"""Generate the golden parity fixtures for the TypeScript client.

Where a CLI command exists for an operation the fixture is produced by
actually running `coditkit` on temp files, so the client is pinned to the
command line tool's observable output; pure-library fixtures cover the
operations without a file-level command (the primary test suite in turn pins
library and CLI to each other).

Run from the repository root:  python bindings/tools/make_fixtures.py
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import tempfile
from pathlib import Path

import coditkit as ck
from coditkit.jsonio import dumps

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FIG_TEXT = "@param users List of user objects"
FIG_SPEC = [
    {"start": 1, "length": 1, "kind": "mask-span"},
    {"start": 4, "length": 1, "kind": "delete-span"},
]

METRIC_CASES_DIR = Path(__file__).resolve().parent.parent.parent / "tests"
sys.path.insert(0, str(METRIC_CASES_DIR))
from metric_cases import BLEU_CASES, GLEU_CASES, SARI_CASES  # noqa: E402


def run_cli(*argv: str) -> None:
    subprocess.run(["coditkit", *argv], check=True, capture_output=True, text=True)


def cli_jsonl(workdir: Path, command: list[str], inputs: dict[str, list[dict]],
              out_name: str) -> list[dict]:
    for name, records in inputs.items():
        (workdir / name).write_text("".join(dumps(r) + "\n" for r in records), encoding="utf-8")
    out = workdir / out_name
    run_cli(*[a.format(d=workdir) for a in command], "-o", str(out))
    text = out.read_text(encoding="utf-8")
    if out_name.endswith(".jsonl"):
        return [json.loads(line) for line in text.splitlines()]
    return [json.loads(text)]


def ops_json(plan: ck.EditPlan) -> list[dict]:
    return [
        {"kind": op.kind.value, "old": list(op.old), "new": list(op.new), "position": op.position}
        for op in plan.operations
    ]


def random_seq(rng: random.Random, max_len: int = 12, alphabet: int = 6) -> list[str]:
    return [f"t{rng.randrange(alphabet)}" for _ in range(rng.randrange(max_len + 1))]


def gen_tokenize() -> dict:
    bpe_vocab = list(ck.ALL_MARKERS) + ["l", "o", "w", "e", "s", "t", "lo", "low", " "]
    bpe = ck.Tokenizer(kind="bpe", vocab={t: i for i, t in enumerate(bpe_vocab)},
                       merges=(("l", "o"), ("lo", "w")))
    texts = ["", "@param users List", "lowest low slow towel", "a  b\tc",
             "<Insert> [MASK] <s>", "wes owl"]
    return {
        "whitespace": [{"text": t, "tokens": ck.tokenize(t)} for t in texts],
        "bpe": {
            "vocab_lines": bpe_vocab,
            "merges_lines": ["l o", "lo w"],
            "cases": [{"text": t, "tokens": ck.tokenize(t, bpe)} for t in texts],
        },
        "detokenize": [
            {"kind": "whitespace", "tokens": ["a", "b"], "text": "a b"},
            {"kind": "bpe", "tokens": ["low", "e", "s", "t"], "text": "lowest"},
            {"kind": "bpe", "tokens": ["low", " ", "low"], "text": "low low"},
        ],
        "sanitize": [
            {"text": "x <Insert> y [MASK] z <s>", "clean": ck.sanitize_text("x <Insert> y [MASK] z <s>")},
            {"text": "no markers here", "clean": "no markers here"},
        ],
    }


def gen_edits(rng: random.Random) -> dict:
    pairs = [
        (FIG_TEXT.replace("users", "[MASK]").replace(" user ", " ").split(), FIG_TEXT.split()),
        ([], []), ([], ["a"]), (["a"], []),
        (["a", "b", "c"], ["a", "b", "c"]),
        (["a", "b", "c", "d"], ["a", "c", "d"]),
        (["a", "b", "c", "d"], ["x", "y", "c", "d"]),
        (["a", "a", "a"], ["a", "a", "a", "a"]),
        (["x", "y", "x", "y"], ["y", "x", "y", "x"]),
    ]
    for _ in range(120):
        pairs.append((random_seq(rng), random_seq(rng)))
    cases = []
    for source, target in pairs:
        entry = {"source": source, "target": target, "backends": {}}
        for backend in ck.BACKENDS:
            plan = ck.compute_edit_script(source, target, backend)
            entry["backends"][backend] = {
                "operations": ops_json(plan),
                "serialized": ck.serialize_plan(plan),
            }
        entry["keep_annotated"] = ck.to_keep_annotated(source, target)
        cases.append(entry)
    return {"cases": cases}


def gen_apply(rng: random.Random) -> dict:
    cases = []

    def add(plan_tokens, source, policy):
        plan = ck.parse_plan(plan_tokens)
        entry = {"plan": plan_tokens, "source": source, "policy": policy}
        try:
            entry["result"] = ck.apply_plan(plan, source, policy)
        except ck.SpanNotFound as e:
            entry["error"] = {"code": "span-not-found", "op_index": e.op_index}
        except ck.AmbiguousInsert as e:
            entry["error"] = {"code": "ambiguous-insert", "op_index": e.op_index}
        cases.append(entry)

    fig_plan = ["<ReplaceOld>", "[MASK]", "<ReplaceNew>", "users", "<ReplaceEnd>",
                "<Insert>", "user", "<InsertEnd>"]
    fig_src = ["@param", "[MASK]", "List", "of", "objects"]
    add(fig_plan, fig_src, "leftmost-cursor")
    add(fig_plan, fig_src, "strict")
    add(["<Insert>", "user", "<InsertEnd>"], ["of", "objects"], "strict")
    add(["<Insert>", "user", "<InsertEnd>"], ["of", "objects"], "leftmost-cursor")
    add(["<Delete>", "zz", "<DeleteEnd>"], ["a", "b"], "leftmost-cursor")
    add(["<ReplaceOld>", "a", "<ReplaceNew>", "x", "<ReplaceEnd>",
         "<ReplaceOld>", "a", "<ReplaceNew>", "y", "<ReplaceEnd>"], ["a", "b", "a"], "leftmost-cursor")
    for _ in range(40):
        source = random_seq(rng, 10, 4)
        target = random_seq(rng, 10, 4)
        tokens = ck.serialize_plan(ck.compute_edit_script(source, target))
        add(tokens, source, rng.choice(["leftmost-cursor", "strict"]))
    positional = [
        {"source": fig_src,
         "operations": ops_json(ck.compute_edit_script(fig_src, FIG_TEXT.split())),
         "result": FIG_TEXT.split()},
    ]
    for _ in range(30):
        source, target = random_seq(rng), random_seq(rng)
        plan = ck.compute_edit_script(source, target, rng.choice(ck.BACKENDS))
        positional.append({"source": source, "operations": ops_json(plan),
                           "result": ck.apply_plan(plan, source, "positional")})
    return {"parsed": cases, "positional": positional}


def gen_parse_errors() -> list[dict]:
    bad = [
        ["<ReplaceOld>", "x", "<ReplaceNew>"],
        ["<Insert>", "a"],
        ["<Insert>", "<InsertEnd>"],
        ["<Insert>", "<Delete>", "a", "<InsertEnd>"],
        ["stray"],
        ["<Keep>", "a", "<InsertEnd>"],
        ["<ReplaceOld>", "x", "<ReplaceEnd>"],
        ["<InsertEnd>"],
        ["<ReplaceOld>", "<ReplaceNew>", "y", "<ReplaceEnd>"],
    ]
    out = []
    for tokens in bad:
        try:
            ck.parse_plan(tokens)
            raise AssertionError(f"expected parse failure: {tokens}")
        except ck.MalformedPlan as e:
            out.append({"tokens": tokens, "position": e.position})
    return out


def gen_consistency(rng: random.Random, workdir: Path) -> dict:
    records = []
    fig_src = ["@param", "[MASK]", "List", "of", "objects"]
    fig_plan = ["<ReplaceOld>", "[MASK]", "<ReplaceNew>", "users", "<ReplaceEnd>",
                "<Insert>", "user", "<InsertEnd>"]
    records.append({"id": "fig", "source": fig_src, "plan": fig_plan, "target": FIG_TEXT.split()})
    for i in range(40):
        source, target = random_seq(rng), random_seq(rng)
        plan = ck.serialize_plan(ck.compute_edit_script(source, target))
        if rng.random() < 0.4 and plan:
            j = rng.randrange(len(plan))
            if not plan[j].startswith("<"):
                plan = plan[:j] + ["#mut#"] + plan[j + 1:]
        records.append({"id": str(i), "source": source, "plan": plan, "target": target})
    out = cli_jsonl(workdir, ["check-consistency", "--input", "{d}/triples.jsonl"],
                    {"triples.jsonl": records}, "consistency.jsonl")
    return {"inputs": records, "cli_output": out}


def gen_pretrain(workdir: Path) -> dict:
    (workdir / "force.json").write_text(json.dumps(FIG_SPEC), encoding="utf-8")
    (workdir / "stats.json").write_text(json.dumps({
        "p_insert": 0.2, "p_delete": 0.3, "p_replace": 0.5,
        "mean_span_len": 2.0, "mean_spans_per_seq": 2.0}), encoding="utf-8")
    fig = cli_jsonl(
        workdir,
        ["gen-pretrain", "--input", "{d}/corpus.jsonl", "--stats", "{d}/stats.json",
         "--force-spec", "{d}/force.json", "--verify"],
        {"corpus.jsonl": [{"id": "fig", "text": FIG_TEXT}]},
        "fig.jsonl")[0]

    rng = random.Random(2)
    forced_cases = []
    for _ in range(30):
        seq = [f"w{rng.randrange(20)}" for _ in range(rng.randrange(4, 25))]
        spans = []
        at = 0
        while at < len(seq) - 2 and len(spans) < 3:
            kind = rng.choice(["mask-span", "insert-mask", "delete-span"])
            length = 0 if kind == "insert-mask" else rng.randrange(1, 3)
            if at + length > len(seq) - 1:
                break
            spans.append({"start": at, "length": length, "kind": kind})
            at += length + rng.randrange(1, 4)
        spec = ck.NoiseSpec(tuple(
            ck.NoiseSpan(s["start"], s["length"], ck.NoiseKind(s["kind"])) for s in spans))
        ex = ck.make_pretrain_example(seq, ck.SpanStats(0.2, 0.3, 0.5, 2.0, 2.0),
                                      ck.example_rng(0, 0), "x", spec=spec)
        forced_cases.append({"seq": seq, "spec": spans, "corrupted": ex.corrupted,
                             "edit_plan": ex.edit_plan, "target": ex.target})
    return {
        "fig": {"text": FIG_TEXT, "force_spec": FIG_SPEC, "cli_record": fig},
        "forced_cases": forced_cases,
        "length_filter": [{"length": n, "ok": ck.length_filter(["t"] * n)}
                          for n in (0, 2, 3, 4, 511, 512, 513)],
    }


def gen_metrics(rng: random.Random, workdir: Path) -> dict:
    task_records = [
        {"id": "a", "old_comment": "@return radians", "old_code": "return yaw ;",
         "new_code": "return Math.toDegrees ( yaw ) ;", "new_comment": "@return degrees"},
        {"id": "b", "old_comment": "@param x value", "old_code": "int x ;",
         "new_code": "int x ;", "new_comment": "@param x value"},
        {"id": "c", "old_comment": "@return the size", "old_code": "return n ;",
         "new_code": "return n + 1 ;", "new_comment": "@return the size plus one"},
    ]
    predictions = [
        {"id": "a", "prediction": "@return degrees"},
        {"id": "b", "prediction": "@param x values"},
        {"id": "c", "prediction": "@return the size"},
    ]
    report = cli_jsonl(
        workdir,
        ["evaluate", "--task", "comment-update", "--input", "{d}/task.jsonl",
         "--predictions", "{d}/preds.jsonl"],
        {"task.jsonl": task_records, "preds.jsonl": predictions},
        "report.json")[0]
    copy = cli_jsonl(
        workdir,
        ["copy-rate", "--task", "comment-update", "--input", "{d}/task.jsonl",
         "--predictions", "{d}/preds.jsonl"],
        {}, "copy.json")[0]

    def triples(cases):
        return [{"pred": list(p), "ref": list(r), "source": list(s), "score": v}
                for p, r, s, v in cases]

    rnd_pool = ["a", "b", "c", "d", "x", "y"]
    random_bleu, random_gleu, random_sari = [], [], []
    for _ in range(40):
        p = [rng.choice(rnd_pool) for _ in range(rng.randrange(8))]
        r = [rng.choice(rnd_pool) for _ in range(rng.randrange(8))]
        s = [rng.choice(rnd_pool) for _ in range(rng.randrange(8))]
        random_bleu.append({"pred": p, "ref": r, "score": ck.bleu4(p, r)})
        random_gleu.append({"pred": p, "ref": r, "source": s, "score": ck.gleu(p, r, s)})
        random_sari.append({"pred": p, "ref": r, "source": s, "score": ck.sari(p, r, s)})
    return {
        "bleu": [{"pred": list(p), "ref": list(r), "score": v} for p, r, v in BLEU_CASES],
        "gleu": triples(GLEU_CASES),
        "sari": triples(SARI_CASES),
        "random_bleu": random_bleu,
        "random_gleu": random_gleu,
        "random_sari": random_sari,
        "evaluate_cli": {"task": task_records, "predictions": predictions, "report": report},
        "copy_rate_cli": copy,
    }


def gen_rerank(rng: random.Random, workdir: Path) -> dict:
    lists = [[
        {"tokens": ["first"], "own_logprob": -1.0, "own_length": 1,
         "cross_logprob": -2.0, "cross_length": 1},
        {"tokens": ["second"], "own_logprob": -2.0, "own_length": 1,
         "cross_logprob": -0.5, "cross_length": 1},
    ]]
    for _ in range(25):
        lists.append([
            {"tokens": [f"c{i}"], "own_logprob": -round(rng.random() * 4, 6),
             "own_length": rng.randrange(1, 30),
             "cross_logprob": -round(rng.random() * 4, 6), "cross_length": rng.randrange(1, 30)}
            for i in range(rng.randrange(1, 12))
        ])
    records = [{"id": str(i), "candidates": cands} for i, cands in enumerate(lists)]
    out = cli_jsonl(workdir, ["rerank", "--direction", "edit-reranked-with-gen",
                              "--input", "{d}/cands.jsonl"],
                    {"cands.jsonl": records}, "reranked.jsonl")
    wraps = []
    for _ in range(25):
        source, target = random_seq(rng), random_seq(rng)
        wraps.append({"source": source, "target": target,
                      "wrapped": ck.wrap_generation_as_edit_output(source, target)})
    wraps.append({"source": ["a", "b"], "target": ["a", "b"], "wrapped": ["<s>", "a", "b"]})
    return {
        "inputs": records,
        "cli_output": out,
        "normalize": [{"logprob": -2.0, "length": 2, "score": -1.0},
                      {"logprob": 0.0, "length": 5, "score": 0.0},
                      {"logprob": -3.0, "length": 1, "score": -3.0}],
        "combine": [{"own": -1.0, "cross": -0.5, "score": -1.5},
                    {"own": 0.0, "cross": -0.7, "score": -0.7}],
        "wrap": wraps,
    }


def gen_tasks(workdir: Path) -> dict:
    task_inputs = {
        "comment-update": {"old_comment": "@return radians", "old_code": "return yaw ;",
                           "new_code": "return Math.toDegrees ( yaw ) ;",
                           "new_comment": "@return degrees"},
        "bugfix": {"buggy": "return x", "guidance": "use y", "context": "int y",
                   "fixed": "return y"},
        "code-review": {"code_before": "return emptyList ( ) ;",
                        "review_comment": "Generally better to qualify",
                        "code_after": "return Collections.emptyList ( ) ;"},
    }
    built = {}
    for task, record in task_inputs.items():
        out = cli_jsonl(workdir, ["gen-finetune", "--task", task, "--input", "{d}/t.jsonl"],
                        {"t.jsonl": [dict(record, id="x")]}, f"ft_{task}.jsonl")[0]
        built[task] = {"record": record, "cli_record": out}
    extract = []
    for output in (["p", "<s>", "t", "u"], ["<s>"], ["t", "u"], ["a", "<s>", "b", "<s>", "c"]):
        tokens, missing = ck.extract_target(output)
        extract.append({"output": output, "tokens": tokens, "missing_separator": missing})
    return {"build": built, "extract": extract,
            "copy_rate": [
                {"preds": [["a"], ["b"]], "inputs": [["a"], ["b"]], "rate": 1.0},
                {"preds": [["a"], ["x"], ["y"], ["z"]], "inputs": [["a"], ["b"], ["c"], ["d"]], "rate": 0.25},
            ]}


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20260810)
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        sections = {
            "tokenize.json": gen_tokenize(),
            "edits.json": gen_edits(rng),
            "apply.json": gen_apply(rng),
            "parse_errors.json": gen_parse_errors(),
            "consistency.json": gen_consistency(rng, workdir),
            "pretrain.json": gen_pretrain(workdir),
            "metrics.json": gen_metrics(rng, workdir),
            "rerank.json": gen_rerank(rng, workdir),
            "tasks.json": gen_tasks(workdir),
        }
    for name, data in sections.items():
        path = FIXTURES / name
        path.write_text(json.dumps(data, sort_keys=True, ensure_ascii=False, indent=1) + "\n",
                        encoding="utf-8")
        print(f"wrote {path}")
    (FIXTURES / "VERSION").write_text(ck.__version__ + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
