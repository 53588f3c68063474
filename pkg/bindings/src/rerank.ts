/** Two-model reranking with length-normalized log-probabilities. */

import { Backend, computeEditScript, serializePlan } from "./edits.js";
import { MissingCrossScore, ZeroLength } from "./errors.js";
import { SEPARATOR, TokenSeq } from "./tokens.js";

export type RerankDirection = "edit-reranked-with-gen" | "gen-reranked-with-edit";

export interface Candidate {
  tokens: TokenSeq;
  ownLogprob: number;
  ownLength: number;
  crossLogprob?: number | null;
  crossLength?: number | null;
}

export interface RankedCandidate {
  candidate: Candidate;
  combinedScore: number;
  beamRank: number;
}

/** Per-token log-probability: log(P^(1/N)) = logP / N. */
export function normalizeLogprob(logprobSum: number, length: number): number {
  if (length < 1) throw new ZeroLength(`cannot normalize by length ${length}`);
  return logprobSum / length;
}

export function combine(ownNorm: number, crossNorm: number): number {
  return ownNorm + crossNorm;
}

/** Recast a plain generation as an edit-based output sequence. */
export function wrapGenerationAsEditOutput(editableSource: TokenSeq, candidateTarget: TokenSeq,
                                           backend: Backend = "contiguous-longest-match"): TokenSeq {
  const plan = computeEditScript(editableSource, candidateTarget, backend);
  return [...serializePlan(plan), SEPARATOR, ...candidateTarget];
}

/** Sort candidates by the sum of normalized own and cross scores (ties keep
 * the original beam order). */
export function rerank(candidates: Candidate[],
                       _direction: RerankDirection = "edit-reranked-with-gen"): RankedCandidate[] {
  const scored = candidates.map((candidate, i) => {
    if (candidate.crossLogprob === undefined || candidate.crossLogprob === null
        || candidate.crossLength === undefined || candidate.crossLength === null) {
      throw new MissingCrossScore(i);
    }
    return {
      candidate,
      combinedScore: combine(
        normalizeLogprob(candidate.ownLogprob, candidate.ownLength),
        normalizeLogprob(candidate.crossLogprob, candidate.crossLength),
      ),
      beamRank: i,
    };
  });
  return scored.sort((a, b) => b.combinedScore - a.combinedScore || a.beamRank - b.beamRank);
}
