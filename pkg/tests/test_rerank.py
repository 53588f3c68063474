import random

import pytest

from coditkit import (
    Candidate,
    DIRECTION_EDIT_WITH_GEN,
    DIRECTION_GEN_WITH_EDIT,
    MissingCrossScore,
    ZeroLength,
    combine,
    compute_edit_script,
    normalize_logprob,
    parse_plan,
    rerank,
    serialize_plan,
    wrap_generation_as_edit_output,
)

FIG_SOURCE = ["@param", "[MASK]", "List", "of", "objects"]
FIG_TARGET = ["@param", "users", "List", "of", "user", "objects"]


def test_normalize_logprob():
    assert normalize_logprob(-2.0, 2) == -1.0
    assert normalize_logprob(0.0, 5) == 0.0
    assert normalize_logprob(-3.0, 1) == -3.0
    with pytest.raises(ZeroLength):
        normalize_logprob(-1.0, 0)


def test_combine():
    assert combine(-1.0, -0.5) == -1.5
    assert combine(0.0, -0.7) == -0.7
    assert combine(-0.3, -0.4) == combine(-0.4, -0.3)


def test_wrap_copy_candidate():
    s = ["a", "b"]
    assert wrap_generation_as_edit_output(s, s) == ["<s>", "a", "b"]


def test_wrap_figure_pair():
    wrapped = wrap_generation_as_edit_output(FIG_SOURCE, FIG_TARGET)
    assert wrapped == ["<ReplaceOld>", "[MASK]", "<ReplaceNew>", "users", "<ReplaceEnd>",
                       "<Insert>", "user", "<InsertEnd>", "<s>"] + FIG_TARGET


def test_wrap_prefix_parses_back_to_diff():
    rng = random.Random(17)
    for _ in range(50):
        src = [str(rng.randrange(6)) for _ in range(rng.randrange(10))]
        tgt = [str(rng.randrange(6)) for _ in range(rng.randrange(10))]
        wrapped = wrap_generation_as_edit_output(src, tgt)
        sep = wrapped.index("<s>")
        recovered = parse_plan(wrapped[:sep])
        expected = compute_edit_script(src, tgt)
        assert serialize_plan(recovered) == serialize_plan(expected)
        assert wrapped[sep + 1:] == tgt


def _cand(own, own_len, cross, cross_len, tag):
    return Candidate(tokens=[tag], own_logprob=own, own_length=own_len,
                     cross_logprob=cross, cross_length=cross_len)


def test_rerank_single_candidate():
    result = rerank([_cand(-1.0, 1, -1.0, 1, "only")], DIRECTION_EDIT_WITH_GEN)
    assert result.best().tokens == ["only"]


def test_rerank_hand_computed_pair():
    first = _cand(-1.0, 1, -2.0, 1, "first")    # combined -3.0
    second = _cand(-2.0, 1, -0.5, 1, "second")  # combined -2.5
    result = rerank([first, second], DIRECTION_GEN_WITH_EDIT)
    assert [rc.candidate.tokens[0] for rc in result.ranked] == ["second", "first"]
    assert result.ranked[0].combined_score == -2.5
    assert result.ranked[1].combined_score == -3.0


def test_rerank_missing_cross_score():
    with pytest.raises(MissingCrossScore) as exc:
        rerank([_cand(-1.0, 1, None, None, "x")])
    assert exc.value.index == 0


def test_rerank_candidate_validation():
    with pytest.raises(ValueError):
        Candidate(tokens=["a"], own_logprob=0.5, own_length=1)
    with pytest.raises(ValueError):
        Candidate(tokens=["a"], own_logprob=-0.5, own_length=0)


def random_candidates(rng, n):
    return [
        _cand(-rng.random() * 5, rng.randrange(1, 30), -rng.random() * 5, rng.randrange(1, 30), str(i))
        for i in range(n)
    ]


def test_rerank_matches_sort_oracle():
    rng = random.Random(99)
    for _ in range(300):
        cands = random_candidates(rng, rng.randrange(1, 21))
        result = rerank(cands)
        oracle = sorted(
            range(len(cands)),
            key=lambda i: (-(cands[i].own_logprob / cands[i].own_length
                            + cands[i].cross_logprob / cands[i].cross_length), i),
        )
        assert [rc.beam_rank for rc in result.ranked] == oracle


def test_rerank_scale_shift_invariance():
    rng = random.Random(5)
    for _ in range(100):
        cands = random_candidates(rng, 10)
        base_order = [rc.beam_rank for rc in rerank(cands).ranked]
        shift = -rng.random() * 2
        shifted = [
            Candidate(
                tokens=c.tokens,
                own_logprob=c.own_logprob,
                own_length=c.own_length,
                cross_logprob=(c.cross_logprob / c.cross_length + shift) * c.cross_length,
                cross_length=c.cross_length,
            )
            for c in cands
        ]
        assert [rc.beam_rank for rc in rerank(shifted).ranked] == base_order


def test_rerank_equal_cross_preserves_beam_order():
    # equal cross scores: ranking reduces to the producing model's own beam
    cands = [_cand(-0.5 * (i + 1), 1, -1.0, 1, str(i)) for i in range(5)]
    result = rerank(cands)
    assert [rc.beam_rank for rc in result.ranked] == [0, 1, 2, 3, 4]


def test_rerank_stable_on_ties():
    cands = [_cand(-1.0, 1, -1.0, 1, str(i)) for i in range(4)]
    result = rerank(cands)
    assert [rc.beam_rank for rc in result.ranked] == [0, 1, 2, 3]


def test_top1_dominance():
    rng = random.Random(23)
    for _ in range(100):
        cands = random_candidates(rng, 8)
        best = Candidate(tokens=["best"], own_logprob=-1e-9, own_length=1,
                         cross_logprob=-1e-9, cross_length=1)
        result = rerank(cands + [best])
        assert result.best().tokens == ["best"]
