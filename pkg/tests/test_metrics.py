import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coditkit import (
    LengthMismatch,
    bleu4,
    bootstrap_test,
    evaluate_corpus,
    gleu,
    sari,
    xmatch,
)

from metric_cases import BLEU_CASES, GLEU_CASES, SARI_CASES, T
from oracles import bleu4_oracle, gleu_oracle, sari_oracle


def test_xmatch():
    assert xmatch(T, T) == 1.0
    assert xmatch(T, T + ["x"]) == 0.0
    assert xmatch(["a", "b"], ["a", "B"]) == 0.0  # case-sensitive


@pytest.mark.parametrize("pred,ref,expected", BLEU_CASES)
def test_bleu4_fixed_cases(pred, ref, expected):
    assert bleu4(pred, ref) == pytest.approx(expected, abs=1e-9)
    assert bleu4(pred, ref) == pytest.approx(bleu4_oracle(pred, ref), abs=1e-12)


@pytest.mark.parametrize("pred,ref,source,expected", GLEU_CASES)
def test_gleu_fixed_cases(pred, ref, source, expected):
    assert gleu(pred, ref, source) == pytest.approx(expected, abs=1e-9)
    assert gleu(pred, ref, source) == pytest.approx(gleu_oracle(pred, ref, source), abs=1e-12)


@pytest.mark.parametrize("pred,ref,source,expected", SARI_CASES)
def test_sari_fixed_cases(pred, ref, source, expected):
    assert sari(pred, ref, source) == pytest.approx(expected, abs=1e-9)
    assert sari(pred, ref, source) == pytest.approx(sari_oracle(pred, ref, source), abs=1e-12)


def test_sari_copy_has_zero_add_f1():
    # pred == source while the reference edits: nothing was added, so the
    # add component contributes 0 at every level with candidate n-grams.
    score_copy = sari(["a", "b", "c"], ["a", "x", "c"], ["a", "b", "c"])
    score_edit = sari(["a", "x", "c"], ["a", "x", "c"], ["a", "b", "c"])
    assert score_copy < score_edit == 1.0


seqs = st.lists(st.sampled_from("abcdxy"), max_size=8)


@settings(max_examples=200, deadline=None)
@given(seqs, seqs, seqs)
def test_metrics_match_oracles_and_stay_bounded(pred, ref, source):
    b = bleu4(pred, ref)
    g = gleu(pred, ref, source)
    s = sari(pred, ref, source)
    assert b == pytest.approx(bleu4_oracle(pred, ref), abs=1e-12)
    assert g == pytest.approx(gleu_oracle(pred, ref, source), abs=1e-12)
    assert s == pytest.approx(sari_oracle(pred, ref, source), abs=1e-12)
    for score in (b, g, s):
        assert 0.0 <= score <= 1.0
    if xmatch(pred, ref) == 1.0:
        assert b == 1.0
        assert g == 1.0


@settings(max_examples=100, deadline=None)
@given(seqs, seqs, seqs)
def test_token_renaming_invariance(pred, ref, source):
    mapping = {"a": "q", "b": "r", "c": "s", "d": "t", "x": "u", "y": "v"}
    rp = [mapping[t] for t in pred]
    rr = [mapping[t] for t in ref]
    rs = [mapping[t] for t in source]
    assert sari(pred, ref, source) == pytest.approx(sari(rp, rr, rs), abs=1e-12)
    assert gleu(pred, ref, source) == pytest.approx(gleu(rp, rr, rs), abs=1e-12)


def test_evaluate_corpus_aggregation():
    preds = [["a"], ["b"], ["x"]]
    refs = [["a"], ["b"], ["y"]]
    sources = [["a"], ["c"], ["x"]]
    report = evaluate_corpus(preds, refs, sources)
    assert report.count == 3
    for name, scores in report.per_example.items():
        assert report.corpus[name] == pytest.approx(sum(scores) / 3, abs=1e-15)
    assert report.corpus["xmatch"] == pytest.approx(2 / 3)
    assert report.metadata["meteor"] == "not computed"


def test_evaluate_corpus_identity_and_disjoint():
    identity = evaluate_corpus([T], [T], [T])
    assert all(v == 1.0 for v in identity.corpus.values())
    disjoint = evaluate_corpus([["q"]], [["z"]], [["w"]])
    assert disjoint.corpus["xmatch"] == 0.0
    assert disjoint.corpus["bleu4"] == 0.0


def test_evaluate_corpus_errors():
    with pytest.raises(LengthMismatch):
        evaluate_corpus([T], [T, T], [T, T])
    with pytest.raises(ValueError):
        evaluate_corpus([T], [T], None, ("gleu",))
    with pytest.raises(ValueError):
        evaluate_corpus([T], [T], [T], ("nope",))


# ------------------------------------------------------------- bootstrap

def test_bootstrap_identical_lists():
    scores = [0.25, 0.5, 0.75, 1.0]
    result = bootstrap_test(scores, scores, 1000, np.random.default_rng(0))
    assert result.observed_delta == 0.0
    assert result.p_value == 1.0


def test_bootstrap_clear_separation():
    rng = np.random.default_rng(7)
    result = bootstrap_test([1.0] * 100, [0.0] * 100, 2000, rng)
    assert result.observed_delta == pytest.approx(1.0)
    assert result.p_value < 0.05


def test_bootstrap_swapped_arguments():
    a = [1.0, 0.5, 0.25, 0.0, 1.0, 0.75]
    b = [0.0, 0.5, 0.5, 0.25, 0.5, 0.5]
    r1 = bootstrap_test(a, b, 1500, np.random.default_rng(3))
    r2 = bootstrap_test(b, a, 1500, np.random.default_rng(3))
    assert r1.observed_delta == pytest.approx(-r2.observed_delta)
    assert r1.p_value == pytest.approx(r2.p_value)


def test_bootstrap_preconditions():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        bootstrap_test([1.0], [0.5], 1000, rng)
    with pytest.raises(LengthMismatch):
        bootstrap_test([1.0, 0.5], [0.5], 1000, rng)
    with pytest.raises(ValueError):
        bootstrap_test([1.0, 0.5], [0.5, 0.1], 999, rng)
