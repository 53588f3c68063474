/** Corruption with explicit span specs and pretraining triple assembly.
 *
 * Sampling specs from statistics stays on the Python side (it owns the seeded
 * RNG streams); this client corrupts with a given spec, which is also how the
 * golden fixtures are produced (`gen-pretrain --force-spec`).
 */

import { Backend, computeEditScript, serializePlan } from "./edits.js";
import { SpecOutOfBounds } from "./errors.js";
import { MASK, TokenSeq } from "./tokens.js";

export type NoiseKind = "mask-span" | "insert-mask" | "delete-span";

export interface NoiseSpan {
  start: number;
  length: number;
  kind: NoiseKind;
}

export interface PretrainExample {
  id: string;
  corrupted: TokenSeq;
  editPlan: TokenSeq;
  target: TokenSeq;
}

export const MIN_PRETRAIN_LEN = 3;
export const MAX_PRETRAIN_LEN = 512;

export function lengthFilter(seq: TokenSeq): boolean {
  return seq.length >= MIN_PRETRAIN_LEN && seq.length <= MAX_PRETRAIN_LEN;
}

/** Apply a noise spec; edits run right-to-left so indices stay valid. */
export function corrupt(seq: TokenSeq, spec: NoiseSpan[]): TokenSeq {
  let end = 0;
  for (const span of spec) {
    if (span.start < end || span.length < 0) {
      throw new SpecOutOfBounds(`spans must be sorted and non-overlapping: ${JSON.stringify(span)}`);
    }
    if (span.kind === "insert-mask" ? span.length !== 0 : span.length < 1) {
      throw new SpecOutOfBounds(`bad span length for ${span.kind}: ${span.length}`);
    }
    if (span.start + span.length > seq.length) {
      throw new SpecOutOfBounds(
        `span ${JSON.stringify(span)} does not fit a ${seq.length}-token sequence`);
    }
    end = span.start + span.length;
  }
  const out = [...seq];
  for (let i = spec.length - 1; i >= 0; i--) {
    const span = spec[i];
    if (span.kind === "mask-span") out.splice(span.start, span.length, MASK);
    else if (span.kind === "insert-mask") out.splice(span.start, 0, MASK);
    else out.splice(span.start, span.length);
  }
  return out;
}

/** Corrupt one clean sequence with an explicit spec and emit the triple. */
export function makePretrainExample(seq: TokenSeq, spec: NoiseSpan[], id: string,
                                    backend: Backend = "contiguous-longest-match"): PretrainExample {
  if (!lengthFilter(seq)) {
    throw new Error(
      `sequence length ${seq.length} is outside [${MIN_PRETRAIN_LEN}, ${MAX_PRETRAIN_LEN}]`);
  }
  const corrupted = corrupt(seq, spec);
  const plan = computeEditScript(corrupted, seq, backend);
  return { id, corrupted, editPlan: serializePlan(plan), target: [...seq] };
}
