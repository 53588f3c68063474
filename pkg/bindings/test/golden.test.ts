/** Golden-file parity: every bound operation must reproduce the fixture
 * values generated from the core library and CLI (tools/make_fixtures.py). */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import {
  AmbiguousInsert,
  EditPlan,
  MalformedPlan,
  SpanNotFound,
  TokenizerHandle,
  VERSION,
  applyPlan,
  bleu4,
  buildBugfixInput,
  buildCodeReviewInput,
  buildCommentUpdateInput,
  checkConsistency,
  computeEditScript,
  copyRate,
  corrupt,
  detokenize,
  evaluateCorpus,
  extractTarget,
  gleu,
  loadTokenizer,
  lengthFilter,
  makePretrainExample,
  normalizeLogprob,
  combine,
  parsePlan,
  rerank,
  sanitizeText,
  sari,
  serializePlan,
  toKeepAnnotated,
  tokenize,
  wrapGenerationAsEditOutput,
  xmatch,
} from "../src/index.js";
import type { Backend, NoiseSpan } from "../src/index.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

const FLOAT_TOL = 1e-12;

describe("version", () => {
  it("matches the core library version", () => {
    const core = readFileSync(join(FIXTURES, "VERSION"), "utf-8").trim();
    expect(VERSION).toBe(core);
  });
});

describe("tokenize", () => {
  const data = fixture<any>("tokenize.json");

  it("whitespace cases", () => {
    for (const c of data.whitespace) {
      expect(tokenize(c.text)).toEqual(c.tokens);
    }
  });

  it("bpe cases from vocab/merges file content", () => {
    const tok = loadTokenizer(data.bpe.vocab_lines.join("\n") + "\n",
      data.bpe.merges_lines.join("\n") + "\n");
    expect(tok.kind).toBe("bpe");
    for (const c of data.bpe.cases) {
      expect(tokenize(c.text, tok)).toEqual(c.tokens);
    }
  });

  it("detokenize cases", () => {
    const bpe = loadTokenizer(data.bpe.vocab_lines.join("\n") + "\n",
      data.bpe.merges_lines.join("\n") + "\n");
    for (const c of data.detokenize) {
      const tok = c.kind === "bpe" ? bpe : TokenizerHandle.whitespace();
      expect(detokenize(c.tokens, tok)).toBe(c.text);
    }
  });

  it("sanitize cases", () => {
    for (const c of data.sanitize) {
      expect(sanitizeText(c.text)).toBe(c.clean);
    }
  });
});

function fromOps(ops: any[]): EditPlan {
  return ops.map((op) => ({ kind: op.kind, old: op.old, new: op.new, position: op.position }));
}

describe("edit scripts", () => {
  const data = fixture<any>("edits.json");

  it("both backends reproduce operations and serialization", () => {
    for (const c of data.cases) {
      for (const backend of Object.keys(c.backends) as Backend[]) {
        const plan = computeEditScript(c.source, c.target, backend);
        const expected = c.backends[backend];
        expect(plan).toEqual(fromOps(expected.operations));
        expect(serializePlan(plan)).toEqual(expected.serialized);
        expect(applyPlan(plan, c.source, "positional")).toEqual(c.target);
      }
      expect(toKeepAnnotated(c.source, c.target)).toEqual(c.keep_annotated);
    }
  });
});

describe("plan application", () => {
  const data = fixture<any>("apply.json");

  it("parsed plans under cursor policies", () => {
    for (const c of data.parsed) {
      const plan = parsePlan(c.plan);
      if (c.error) {
        try {
          applyPlan(plan, c.source, c.policy);
          expect.unreachable(`expected ${c.error.code}`);
        } catch (e) {
          if (c.error.code === "span-not-found") {
            expect(e).toBeInstanceOf(SpanNotFound);
            expect((e as SpanNotFound).opIndex).toBe(c.error.op_index);
          } else {
            expect(e).toBeInstanceOf(AmbiguousInsert);
            expect((e as AmbiguousInsert).opIndex).toBe(c.error.op_index);
          }
        }
      } else {
        expect(applyPlan(plan, c.source, c.policy)).toEqual(c.result);
      }
    }
  });

  it("positional plans splice at recorded positions", () => {
    for (const c of data.positional) {
      expect(applyPlan(fromOps(c.operations), c.source, "positional")).toEqual(c.result);
    }
  });
});

describe("parse errors", () => {
  it("malformed plans raise with the fixture position", () => {
    for (const c of fixture<any[]>("parse_errors.json")) {
      try {
        parsePlan(c.tokens);
        expect.unreachable("expected MalformedPlan");
      } catch (e) {
        expect(e).toBeInstanceOf(MalformedPlan);
        expect((e as MalformedPlan).position).toBe(c.position);
      }
    }
  });
});

describe("consistency", () => {
  const data = fixture<any>("consistency.json");

  it("matches the check-consistency CLI output", () => {
    const byId = new Map(data.cli_output.map((r: any) => [r.id, r]));
    for (const input of data.inputs) {
      const expected: any = byId.get(input.id);
      const report = checkConsistency(parsePlan(input.plan), input.source, input.target);
      expect(report.consistent).toBe(expected.consistent);
      expect(report.appliedResult).toEqual(expected.applied_result);
      expect(report.divergenceIndex).toBe(expected.divergence_index);
    }
  });
});

describe("corruption", () => {
  const data = fixture<any>("pretrain.json");

  it("reproduces the CLI gen-pretrain --force-spec record", () => {
    const spec: NoiseSpan[] = data.fig.force_spec;
    const ex = makePretrainExample(tokenize(data.fig.text), spec, data.fig.cli_record.id);
    expect(ex.corrupted).toEqual(data.fig.cli_record.corrupted);
    expect(ex.editPlan).toEqual(data.fig.cli_record.edit_plan);
    expect(ex.target).toEqual(data.fig.cli_record.target);
  });

  it("forced-spec library cases", () => {
    for (const c of data.forced_cases) {
      expect(corrupt(c.seq, c.spec)).toEqual(c.corrupted);
      const ex = makePretrainExample(c.seq, c.spec, "x");
      expect(ex.editPlan).toEqual(c.edit_plan);
      expect(ex.target).toEqual(c.target);
    }
  });

  it("length filter boundaries", () => {
    for (const c of data.length_filter) {
      expect(lengthFilter(new Array(c.length).fill("t"))).toBe(c.ok);
    }
  });
});

describe("metrics", () => {
  const data = fixture<any>("metrics.json");

  it("fixed and random bleu/gleu/sari cases", () => {
    for (const c of data.bleu) expect(bleu4(c.pred, c.ref)).toBeCloseTo(c.score, 12);
    for (const c of data.random_bleu) expect(bleu4(c.pred, c.ref)).toBeCloseTo(c.score, 12);
    for (const c of [...data.gleu, ...data.random_gleu]) {
      expect(gleu(c.pred, c.ref, c.source)).toBeCloseTo(c.score, 12);
    }
    for (const c of [...data.sari, ...data.random_sari]) {
      expect(sari(c.pred, c.ref, c.source)).toBeCloseTo(c.score, 12);
    }
  });

  it("matches the evaluate CLI report", () => {
    const { task, predictions, report } = data.evaluate_cli;
    const preds = predictions.map((p: any) => tokenize(p.prediction));
    const refs = task.map((t: any) => tokenize(sanitizeText(t.new_comment)));
    const sources = task.map((t: any) => tokenize(sanitizeText(t.old_comment)));
    const mine = evaluateCorpus(preds, refs, sources);
    expect(mine.count).toBe(report.count);
    for (const name of Object.keys(report.corpus)) {
      expect(mine.corpus[name]).toBeCloseTo(report.corpus[name], 12);
      report.per_example[name].forEach((score: number, i: number) => {
        expect(mine.perExample[name][i]).toBeCloseTo(score, 12);
      });
    }
  });

  it("matches the copy-rate CLI output", () => {
    const { task, predictions } = data.evaluate_cli;
    const preds = predictions.map((p: any) => tokenize(p.prediction));
    const editable = task.map((t: any) => tokenize(sanitizeText(t.old_comment)));
    expect(copyRate(preds, editable)).toBeCloseTo(data.copy_rate_cli.copy_rate, 12);
  });

  it("xmatch basics", () => {
    expect(xmatch(["a"], ["a"])).toBe(1.0);
    expect(xmatch(["a"], ["A"])).toBe(0.0);
  });
});

describe("rerank", () => {
  const data = fixture<any>("rerank.json");

  it("matches the rerank CLI output", () => {
    const byId = new Map(data.cli_output.map((r: any) => [r.id, r]));
    for (const input of data.inputs) {
      const expected: any = byId.get(input.id);
      const ranked = rerank(input.candidates.map((c: any) => ({
        tokens: c.tokens,
        ownLogprob: c.own_logprob,
        ownLength: c.own_length,
        crossLogprob: c.cross_logprob,
        crossLength: c.cross_length,
      })));
      expect(ranked.length).toBe(expected.candidates.length);
      ranked.forEach((rc, i) => {
        const want = expected.candidates[i];
        expect(rc.candidate.tokens).toEqual(want.tokens);
        expect(rc.beamRank).toBe(want.beam_rank);
        expect(rc.combinedScore).toBeCloseTo(want.combined_score, 12);
      });
    }
  });

  it("normalize / combine / wrap cases", () => {
    for (const c of data.normalize) {
      expect(normalizeLogprob(c.logprob, c.length)).toBeCloseTo(c.score, 15);
    }
    for (const c of data.combine) {
      expect(combine(c.own, c.cross)).toBeCloseTo(c.score, 15);
    }
    for (const c of data.wrap) {
      expect(wrapGenerationAsEditOutput(c.source, c.target)).toEqual(c.wrapped);
    }
  });
});

describe("task inputs", () => {
  const data = fixture<any>("tasks.json");

  it("builders reproduce the gen-finetune CLI inputs and edit targets", () => {
    const build = data.build;
    {
      const r = build["comment-update"].record;
      const built = buildCommentUpdateInput({
        oldComment: tokenize(sanitizeText(r.old_comment)),
        oldCode: tokenize(sanitizeText(r.old_code)),
        newCode: tokenize(sanitizeText(r.new_code)),
      });
      expect(built).toEqual(build["comment-update"].cli_record.input);
    }
    {
      const r = build["bugfix"].record;
      const built = buildBugfixInput({
        buggy: tokenize(sanitizeText(r.buggy)),
        guidance: tokenize(sanitizeText(r.guidance)),
        context: tokenize(sanitizeText(r.context)),
      });
      expect(built).toEqual(build["bugfix"].cli_record.input);
    }
    {
      const r = build["code-review"].record;
      const built = buildCodeReviewInput({
        codeBefore: tokenize(sanitizeText(r.code_before)),
        reviewComment: tokenize(sanitizeText(r.review_comment)),
      });
      expect(built).toEqual(build["code-review"].cli_record.input);
    }
    for (const [task, editableField, referenceField] of [
      ["comment-update", "old_comment", "new_comment"],
      ["bugfix", "buggy", "fixed"],
      ["code-review", "code_before", "code_after"],
    ] as const) {
      const r = build[task].record;
      const wrapped = wrapGenerationAsEditOutput(
        tokenize(sanitizeText(r[editableField])), tokenize(sanitizeText(r[referenceField])));
      expect(wrapped).toEqual(build[task].cli_record.edit_target);
    }
  });

  it("extract-target cases", () => {
    for (const c of data.extract) {
      const got = extractTarget(c.output);
      expect(got.tokens).toEqual(c.tokens);
      expect(got.missingSeparator).toBe(c.missing_separator);
    }
  });

  it("copy-rate cases", () => {
    for (const c of data.copy_rate) {
      expect(copyRate(c.preds, c.inputs)).toBeCloseTo(c.rate, FLOAT_TOL);
    }
  });
});
