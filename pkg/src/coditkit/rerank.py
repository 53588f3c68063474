"""Two-model reranking with length-normalized log-probabilities.

The toolkit never runs models: candidate files arrive with both models' sums
of token log-probabilities precomputed, and the reranking score is the sum of
the two per-token-normalized scores. Ties keep the original beam order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .edits import BACKEND_LONGEST_MATCH, compute_edit_script, serialize_plan
from .errors import MissingCrossScore, ZeroLength
from .tokens import SEPARATOR, TokenSeq

DIRECTION_EDIT_WITH_GEN = "edit-reranked-with-gen"
DIRECTION_GEN_WITH_EDIT = "gen-reranked-with-edit"
DIRECTIONS = (DIRECTION_EDIT_WITH_GEN, DIRECTION_GEN_WITH_EDIT)


@dataclass(frozen=True)
class Candidate:
    tokens: TokenSeq
    own_logprob: float
    own_length: int
    cross_logprob: float | None = None
    cross_length: int | None = None

    def __post_init__(self):
        if self.own_length < 1:
            raise ValueError("own_length must be >= 1")
        if self.own_logprob > 0:
            raise ValueError("log-probabilities cannot be positive")
        if self.cross_logprob is not None and self.cross_logprob > 0:
            raise ValueError("log-probabilities cannot be positive")
        if self.cross_length is not None and self.cross_length < 1:
            raise ValueError("cross_length must be >= 1")


@dataclass(frozen=True)
class RankedCandidate:
    candidate: Candidate
    combined_score: float
    beam_rank: int


@dataclass(frozen=True)
class RerankedList:
    ranked: tuple[RankedCandidate, ...]
    direction: str

    def best(self) -> Candidate:
        return self.ranked[0].candidate


def normalize_logprob(logprob_sum: float, length: int) -> float:
    """Per-token log-probability: log(P^(1/N)) = logP / N."""
    if length < 1:
        raise ZeroLength(f"cannot normalize by length {length}")
    return logprob_sum / length


def combine(own_norm: float, cross_norm: float) -> float:
    return own_norm + cross_norm


def wrap_generation_as_edit_output(editable_source: TokenSeq, candidate_target: TokenSeq,
                                   backend: str = BACKEND_LONGEST_MATCH) -> TokenSeq:
    """Recast a plain generation as an edit-based output sequence.

    The edit plan from the editable source to the candidate is serialized and
    prepended, separator in between, so an edit model can score it.
    """
    plan = compute_edit_script(editable_source, candidate_target, backend)
    return serialize_plan(plan) + [SEPARATOR] + list(candidate_target)


def rerank(candidates: list[Candidate], direction: str = DIRECTION_EDIT_WITH_GEN) -> RerankedList:
    """Sort candidates by the sum of normalized own and cross scores."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown rerank direction: {direction!r}")
    scored = []
    for i, cand in enumerate(candidates):
        if cand.cross_logprob is None or cand.cross_length is None:
            raise MissingCrossScore(i)
        score = combine(
            normalize_logprob(cand.own_logprob, cand.own_length),
            normalize_logprob(cand.cross_logprob, cand.cross_length),
        )
        scored.append(RankedCandidate(candidate=cand, combined_score=score, beam_rank=i))
    ranked = sorted(scored, key=lambda rc: -rc.combined_score)
    return RerankedList(ranked=tuple(ranked), direction=direction)
