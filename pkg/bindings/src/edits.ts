/** Edit plans: computation, serialization, parsing, application, validation.
 *
 * Faithful port of the core algorithms; the vitest suite pins every code path
 * to golden files produced by the Python library and CLI.
 */

import { AmbiguousInsert, MalformedPlan, SpanNotFound } from "./errors.js";
import {
  DELETE, DELETE_END, INSERT, INSERT_END, KEEP, KEEP_END,
  REPLACE_END, REPLACE_NEW, REPLACE_OLD, TokenSeq,
} from "./tokens.js";

export type OpKind = "insert" | "delete" | "replace" | "keep";

export interface EditOperation {
  kind: OpKind;
  old: TokenSeq;
  new: TokenSeq;
  position: number | null;
}

export type EditPlan = EditOperation[];

export type Backend = "contiguous-longest-match" | "minimal-levenshtein";
export type ApplyPolicy = "positional" | "leftmost-cursor" | "strict";

export const BACKENDS: Backend[] = ["contiguous-longest-match", "minimal-levenshtein"];

export function isPositional(plan: EditPlan): boolean {
  return plan.every((op) => op.position !== null);
}

function intern(source: TokenSeq, target: TokenSeq): { a: Int32Array; b: Int32Array; nsym: number } {
  const ids = new Map<string, number>();
  const get = (t: string): number => {
    let id = ids.get(t);
    if (id === undefined) {
      id = ids.size;
      ids.set(t, id);
    }
    return id;
  };
  const a = Int32Array.from(source, get);
  const b = Int32Array.from(target, get);
  return { a, b, nsym: ids.size };
}

type Opcode = [tag: "equal" | "replace" | "delete" | "insert", i1: number, i2: number, j1: number, j2: number];

/** Recursive longest matching block opcodes (no junk heuristics): the longest
 * block wins, ties broken by earliest start in a, then in b. */
function opcodesLongestMatch(source: TokenSeq, target: TokenSeq): Opcode[] {
  const { a, b, nsym } = intern(source, target);
  const n = a.length;
  const m = b.length;
  const blocks: Array<[number, number, number]> = [];
  if (n > 0 && m > 0) {
    // positions of each symbol in b, ascending (CSR layout)
    const counts = new Int32Array(nsym + 1);
    for (let j = 0; j < m; j++) counts[b[j] + 1]++;
    for (let s = 0; s < nsym; s++) counts[s + 1] += counts[s];
    const pos = new Int32Array(m);
    const fill = counts.slice(0, nsym);
    for (let j = 0; j < m; j++) {
      pos[fill[b[j]]] = j;
      fill[b[j]]++;
    }
    let j2len = new Int32Array(m + 1);
    let newj2len = new Int32Array(m + 1);
    const stack: Array<[number, number, number, number]> = [[0, n, 0, m]];
    while (stack.length > 0) {
      const [alo, ahi, blo, bhi] = stack.pop()!;
      let besti = alo;
      let bestj = blo;
      let bestsize = 0;
      j2len.fill(0, blo, bhi + 1);
      for (let i = alo; i < ahi; i++) {
        const sym = a[i];
        newj2len.fill(0, blo, bhi + 1);
        for (let t = counts[sym]; t < counts[sym + 1]; t++) {
          const j = pos[t];
          if (j < blo) continue;
          if (j >= bhi) break;
          const k = (j > blo ? j2len[j - 1] : 0) + 1;
          newj2len[j] = k;
          if (k > bestsize) {
            besti = i - k + 1;
            bestj = j - k + 1;
            bestsize = k;
          }
        }
        const tmp = j2len;
        j2len = newj2len;
        newj2len = tmp;
      }
      if (bestsize > 0) {
        blocks.push([besti, bestj, bestsize]);
        if (alo < besti && blo < bestj) stack.push([alo, besti, blo, bestj]);
        if (besti + bestsize < ahi && bestj + bestsize < bhi) {
          stack.push([besti + bestsize, ahi, bestj + bestsize, bhi]);
        }
      }
    }
  }
  blocks.sort((x, y) => x[0] - y[0] || x[1] - y[1]);
  const merged: Array<[number, number, number]> = [];
  for (const [i1, j1, k1] of blocks) {
    const last = merged[merged.length - 1];
    if (last && last[0] + last[2] === i1 && last[1] + last[2] === j1) {
      last[2] += k1;
    } else {
      merged.push([i1, j1, k1]);
    }
  }
  merged.push([n, m, 0]);
  const opcodes: Opcode[] = [];
  let i = 0;
  let j = 0;
  for (const [ai, bj, size] of merged) {
    if (i < ai && j < bj) opcodes.push(["replace", i, ai, j, bj]);
    else if (i < ai) opcodes.push(["delete", i, ai, j, bj]);
    else if (j < bj) opcodes.push(["insert", i, ai, j, bj]);
    if (size > 0) opcodes.push(["equal", ai, ai + size, bj, bj + size]);
    i = ai + size;
    j = bj + size;
  }
  return opcodes;
}

const STEP_MATCH = 0, STEP_DELETE = 1, STEP_INSERT = 2, STEP_REPLACE = 3;

/** Minimal edit script opcodes: unit-cost DP with match > delete > insert >
 * replace backtrack preference (keeps edits leftmost, deterministic). */
function opcodesMinimal(source: TokenSeq, target: TokenSeq): Opcode[] {
  const { a, b } = intern(source, target);
  const n = a.length;
  const m = b.length;
  const width = m + 1;
  const d = new Int32Array((n + 1) * width);
  for (let i = 0; i <= n; i++) d[i * width] = i;
  for (let j = 0; j <= m; j++) d[j] = j;
  for (let i = 1; i <= n; i++) {
    const ai = a[i - 1];
    const row = i * width;
    const prev = row - width;
    for (let j = 1; j <= m; j++) {
      let c = d[prev + j - 1];
      if (ai !== b[j - 1]) {
        c += 1;
        if (d[prev + j] + 1 < c) c = d[prev + j] + 1;
        if (d[row + j - 1] + 1 < c) c = d[row + j - 1] + 1;
      }
      d[row + j] = c;
    }
  }
  const steps: number[] = [];
  let i = n;
  let j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && a[i - 1] === b[j - 1] && d[i * width + j] === d[(i - 1) * width + j - 1]) {
      steps.push(STEP_MATCH); i--; j--;
    } else if (i > 0 && d[i * width + j] === d[(i - 1) * width + j] + 1) {
      steps.push(STEP_DELETE); i--;
    } else if (j > 0 && d[i * width + j] === d[i * width + j - 1] + 1) {
      steps.push(STEP_INSERT); j--;
    } else {
      steps.push(STEP_REPLACE); i--; j--;
    }
  }
  steps.reverse();
  const opcodes: Opcode[] = [];
  let si = 0;
  let sj = 0;
  let k = 0;
  while (k < steps.length) {
    const step = steps[k];
    let run = k;
    while (run < steps.length && steps[run] === step) run++;
    const count = run - k;
    if (step === STEP_MATCH) opcodes.push(["equal", si, si + count, sj, sj + count]);
    else if (step === STEP_REPLACE) opcodes.push(["replace", si, si + count, sj, sj + count]);
    else if (step === STEP_DELETE) opcodes.push(["delete", si, si + count, sj, sj]);
    else opcodes.push(["insert", si, si, sj, sj + count]);
    if (step !== STEP_INSERT) si += count;
    if (step !== STEP_DELETE) sj += count;
    k = run;
  }
  return opcodes;
}

function alignedOperations(source: TokenSeq, target: TokenSeq, backend: Backend): EditPlan {
  const opcodes = backend === "contiguous-longest-match"
    ? opcodesLongestMatch(source, target)
    : opcodesMinimal(source, target);
  return opcodes.map(([tag, i1, i2, j1, j2]) => {
    const old = source.slice(i1, i2);
    const niu = target.slice(j1, j2);
    if (tag === "equal") return { kind: "keep" as const, old, new: niu, position: i1 };
    if (tag === "replace") return { kind: "replace" as const, old, new: niu, position: i1 };
    if (tag === "delete") return { kind: "delete" as const, old, new: [], position: i1 };
    return { kind: "insert" as const, old: [], new: niu, position: i1 };
  });
}

function coalesce(ops: EditPlan): EditPlan {
  const out: EditPlan = [];
  for (const op of ops) {
    const prev = out[out.length - 1];
    if (prev && prev.kind === op.kind && prev.position !== null && op.position !== null
        && prev.position + prev.old.length === op.position) {
      out[out.length - 1] = {
        kind: prev.kind,
        old: [...prev.old, ...op.old],
        new: [...prev.new, ...op.new],
        position: prev.position,
      };
    } else {
      out.push(op);
    }
  }
  return out;
}

/** Positional plan turning source into target; empty iff the two are equal. */
export function computeEditScript(source: TokenSeq, target: TokenSeq,
                                  backend: Backend = "contiguous-longest-match"): EditPlan {
  return coalesce(alignedOperations(source, target, backend).filter((op) => op.kind !== "keep"));
}

/** Flatten a plan into the marker grammar; source positions are dropped. */
export function serializePlan(plan: EditPlan): TokenSeq {
  const out: string[] = [];
  for (const op of plan) {
    if (op.kind === "replace") {
      out.push(REPLACE_OLD, ...op.old, REPLACE_NEW, ...op.new, REPLACE_END);
    } else if (op.kind === "insert") {
      out.push(INSERT, ...op.new, INSERT_END);
    } else if (op.kind === "delete") {
      out.push(DELETE, ...op.old, DELETE_END);
    } else {
      out.push(KEEP, ...op.old, KEEP_END);
    }
  }
  return out;
}

const MARKER_TOKENS = new Set([
  INSERT, INSERT_END, DELETE, DELETE_END, REPLACE_OLD, REPLACE_NEW, REPLACE_END, KEEP, KEEP_END,
]);

function takeSpan(tokens: TokenSeq, pos: number, terminators: Set<string>): [TokenSeq, number] {
  const span: string[] = [];
  while (pos < tokens.length) {
    const tok = tokens[pos];
    if (terminators.has(tok)) return [span, pos + 1];
    if (MARKER_TOKENS.has(tok)) {
      throw new MalformedPlan(pos, `unexpected marker ${tok} inside a span`);
    }
    span.push(tok);
    pos += 1;
  }
  throw new MalformedPlan(tokens.length, "unterminated operation");
}

const SIMPLE_OPENERS: Record<string, [OpKind, string]> = {
  [INSERT]: ["insert", INSERT_END],
  [DELETE]: ["delete", DELETE_END],
  [KEEP]: ["keep", KEEP_END],
};

/** Recover a (non-positional) plan from its serialized token form. */
export function parsePlan(tokens: TokenSeq): EditPlan {
  const ops: EditPlan = [];
  let pos = 0;
  while (pos < tokens.length) {
    const opener = tokens[pos];
    const start = pos;
    pos += 1;
    if (opener === REPLACE_OLD) {
      let old: TokenSeq;
      let niu: TokenSeq;
      [old, pos] = takeSpan(tokens, pos, new Set([REPLACE_NEW]));
      if (old.length === 0) throw new MalformedPlan(start, "replace has an empty old span");
      [niu, pos] = takeSpan(tokens, pos, new Set([REPLACE_END]));
      if (niu.length === 0) throw new MalformedPlan(start, "replace has an empty new span");
      ops.push({ kind: "replace", old, new: niu, position: null });
    } else if (opener in SIMPLE_OPENERS) {
      const [kind, end] = SIMPLE_OPENERS[opener];
      let span: TokenSeq;
      [span, pos] = takeSpan(tokens, pos, new Set([end]));
      if (span.length === 0) throw new MalformedPlan(start, `${opener} has an empty span`);
      if (kind === "insert") ops.push({ kind, old: [], new: span, position: null });
      else if (kind === "delete") ops.push({ kind, old: span, new: [], position: null });
      else ops.push({ kind, old: span, new: [...span], position: null });
    } else {
      throw new MalformedPlan(start, `token ${opener} outside any operation`);
    }
  }
  return ops;
}

function spansEqual(a: TokenSeq, b: TokenSeq): boolean {
  return a.length === b.length && a.every((t, i) => t === b[i]);
}

function spliceAt(out: string[], source: TokenSeq, op: EditOperation,
                  opIndex: number, cursor: number, pos: number): number {
  if (pos < cursor || pos > source.length) {
    throw new SpanNotFound(opIndex, `position ${pos} not reachable`);
  }
  if (!spansEqual(source.slice(pos, pos + op.old.length), op.old)) {
    throw new SpanNotFound(opIndex, `old span does not match source at ${pos}`);
  }
  out.push(...source.slice(cursor, pos));
  out.push(...op.new);
  return pos + op.old.length;
}

/** Apply a plan to a source sequence.
 *
 * positional: splice every operation at its recorded position (the plan must
 * be positional). leftmost-cursor: positioned operations splice exactly;
 * position-free spans are matched at the leftmost occurrence at or after a
 * cursor and position-free inserts land at the cursor. strict: like
 * leftmost-cursor but an unanchored position-free insert is an error. */
export function applyPlan(plan: EditPlan, source: TokenSeq,
                          policy: ApplyPolicy = "leftmost-cursor"): TokenSeq {
  if (policy === "positional" && !isPositional(plan)) {
    throw new Error("positional policy requires a positional plan");
  }
  const out: string[] = [];
  let cursor = 0;
  let anchored = false;
  plan.forEach((op, idx) => {
    if (op.position !== null) {
      cursor = spliceAt(out, source, op, idx, cursor, op.position);
      anchored = true;
    } else if (op.kind === "insert") {
      if (policy === "strict" && !anchored) throw new AmbiguousInsert(idx);
      out.push(...op.new);
    } else {
      let found = -1;
      for (let i = cursor; i <= source.length - op.old.length; i++) {
        if (spansEqual(source.slice(i, i + op.old.length), op.old)) {
          found = i;
          break;
        }
      }
      if (found < 0) throw new SpanNotFound(idx);
      cursor = spliceAt(out, source, op, idx, cursor, found);
      anchored = true;
    }
  });
  out.push(...source.slice(cursor));
  return out;
}

export interface ConsistencyReport {
  consistent: boolean;
  appliedResult: TokenSeq | null;
  divergenceIndex: number | null;
}

/** Report whether applying the plan to the source reproduces the target;
 * application errors fold into an inconsistent report. */
export function checkConsistency(plan: EditPlan, source: TokenSeq,
                                 target: TokenSeq): ConsistencyReport {
  let applied: TokenSeq;
  try {
    applied = applyPlan(plan, source, "leftmost-cursor");
  } catch (e) {
    if (e instanceof SpanNotFound || e instanceof AmbiguousInsert) {
      return { consistent: false, appliedResult: null, divergenceIndex: null };
    }
    throw e;
  }
  if (spansEqual(applied, target)) {
    return { consistent: true, appliedResult: applied, divergenceIndex: null };
  }
  const limit = Math.min(applied.length, target.length);
  let divergence = limit;
  for (let i = 0; i < limit; i++) {
    if (applied[i] !== target[i]) {
      divergence = i;
      break;
    }
  }
  return { consistent: false, appliedResult: applied, divergenceIndex: divergence };
}

/** Serialize the full alignment of two sequences, Keep spans included. */
export function toKeepAnnotated(source: TokenSeq, target: TokenSeq,
                                backend: Backend = "contiguous-longest-match"): TokenSeq {
  return serializePlan(coalesce(alignedOperations(source, target, backend)));
}
