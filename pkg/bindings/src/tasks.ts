/** Fine-tuning input construction, target extraction, copy rate. */

import { Backend, toKeepAnnotated } from "./edits.js";
import { LengthMismatch } from "./errors.js";
import { SEPARATOR, TokenSeq } from "./tokens.js";

export interface CommentUpdateExample {
  oldComment: TokenSeq;
  oldCode: TokenSeq;
  newCode: TokenSeq;
}

export interface BugFixExample {
  buggy: TokenSeq;
  guidance: TokenSeq;
  context: TokenSeq;
}

export interface CodeReviewExample {
  codeBefore: TokenSeq;
  reviewComment: TokenSeq;
}

export function buildCommentUpdateInput(ex: CommentUpdateExample,
                                        backend: Backend = "contiguous-longest-match"): TokenSeq {
  if (ex.oldComment.length === 0 || ex.oldCode.length === 0 || ex.newCode.length === 0) {
    throw new Error("old comment and both code versions must be non-empty");
  }
  return [...ex.oldComment, SEPARATOR, ...toKeepAnnotated(ex.oldCode, ex.newCode, backend)];
}

export function buildBugfixInput(ex: BugFixExample): TokenSeq {
  if (ex.buggy.length === 0) throw new Error("buggy code must be non-empty");
  return [...ex.buggy, SEPARATOR, ...ex.guidance, SEPARATOR, ...ex.context];
}

export function buildCodeReviewInput(ex: CodeReviewExample): TokenSeq {
  if (ex.codeBefore.length === 0 || ex.reviewComment.length === 0) {
    throw new Error("code and review comment must be non-empty");
  }
  return [...ex.codeBefore, SEPARATOR, ...ex.reviewComment];
}

export interface ExtractedTarget {
  tokens: TokenSeq;
  missingSeparator: boolean;
}

/** Tokens strictly after the first separator; flagged fallback without one. */
export function extractTarget(modelOutput: TokenSeq): ExtractedTarget {
  const i = modelOutput.indexOf(SEPARATOR);
  if (i < 0) return { tokens: [...modelOutput], missingSeparator: true };
  return { tokens: modelOutput.slice(i + 1), missingSeparator: false };
}

/** Fraction of predictions that copy the editable input token-for-token. */
export function copyRate(predictions: TokenSeq[], editableInputs: TokenSeq[]): number {
  if (predictions.length !== editableInputs.length) {
    throw new LengthMismatch("predictions vs editable inputs",
      predictions.length, editableInputs.length);
  }
  if (predictions.length === 0) return 0.0;
  let copied = 0;
  predictions.forEach((p, i) => {
    const s = editableInputs[i];
    if (p.length === s.length && p.every((t, j) => t === s[j])) copied += 1;
  });
  return copied / predictions.length;
}
