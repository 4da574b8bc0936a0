import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascada.core import SpeakerEmbedding
from cascada.metrics import (
    corpus_bleu,
    corpus_wer,
    cosine_similarity,
    latency_stats,
    tokenize,
    wer,
)


class TestTokenize:
    def test_strips_punctuation_and_lowercases(self):
        assert tokenize("The cat, sat!") == ["the", "cat", "sat"]

    def test_empty(self):
        assert tokenize("") == []

    def test_keeps_apostrophes_and_hyphens(self):
        assert tokenize("don't stop") == ["don't", "stop"]
        assert tokenize("well-known (fact)") == ["well-known", "fact"]


class TestCorpusBleu:
    def test_identity_is_exactly_100(self):
        score = corpus_bleu(["the quick brown fox jumps"], ["the quick brown fox jumps"])
        assert score.score == 100.0
        assert score.precisions == (1.0, 1.0, 1.0, 1.0)
        assert score.brevity_penalty == 1.0

    def test_hand_enumerated_fixture(self):
        # hyp 5 tokens vs ref 6 tokens; counts enumerated by hand:
        # p1 = 5/5, p2 = 3/4, p3 = 2/3, p4 = 1/2, BP = exp(1 - 6/5)
        score = corpus_bleu(["the cat sat on mat"], ["the cat sat on the mat"])
        assert score.precisions == (1.0, 3 / 4, 2 / 3, 1 / 2)
        assert score.brevity_penalty == pytest.approx(math.exp(1 - 6 / 5), abs=1e-12)
        expected = 100.0 * math.exp(1 - 6 / 5) * (1.0 * 0.75 * (2 / 3) * 0.5) ** 0.25
        assert score.score == pytest.approx(expected, abs=1e-9)
        assert score.score == pytest.approx(57.893006746, abs=1e-6)

    def test_no_shared_4gram_is_zero(self):
        score = corpus_bleu(["a b c d e"], ["a b c x e"])
        assert score.precisions[3] == 0.0
        assert score.score == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            corpus_bleu(["a"], ["a", "b"])

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            corpus_bleu([], [])

    def test_score_range(self):
        score = corpus_bleu(["a b c d e f", "x y"], ["a b c d g f", "x y"])
        assert 0.0 <= score.score <= 100.0

    @settings(max_examples=30, deadline=None)
    @given(st.lists(
        st.tuples(st.text("abcde ", min_size=5, max_size=30),
                  st.text("abcde ", min_size=5, max_size=30)),
        min_size=2, max_size=6), st.randoms())
    def test_pair_order_permutation_invariant(self, pairs, rnd):
        pairs = [(h, r) for h, r in pairs if tokenize(h) and tokenize(r)]
        if len(pairs) < 2:
            return
        shuffled = list(pairs)
        rnd.shuffle(shuffled)
        a = corpus_bleu([h for h, _ in pairs], [r for _, r in pairs])
        b = corpus_bleu([h for h, _ in shuffled], [r for _, r in shuffled])
        assert a.score == pytest.approx(b.score, abs=1e-9)
        assert a.precisions == b.precisions


def brute_force_distance(hyp, ref):
    """Independent oracle: recursive exhaustive alignment, no DP table."""
    if not hyp:
        return len(ref)
    if not ref:
        return len(hyp)
    return min(
        brute_force_distance(hyp[1:], ref[1:]) + (hyp[0] != ref[0]),
        brute_force_distance(hyp, ref[1:]) + 1,
        brute_force_distance(hyp[1:], ref) + 1,
    )


class TestWer:
    def test_identity(self):
        assert wer("the cat sat", "the cat sat").wer == 0.0

    def test_single_deletion(self):
        score = wer("the cat", "the cat sat")
        assert (score.substitutions, score.deletions, score.insertions) == (0, 1, 0)
        assert score.wer == pytest.approx(1 / 3)

    def test_insertions_can_exceed_ref(self):
        score = wer("a x b y", "a b")
        assert score.insertions == 2
        assert score.wer == 1.0

    def test_substitution(self):
        score = wer("the dog sat", "the cat sat")
        assert (score.substitutions, score.deletions, score.insertions) == (1, 0, 0)

    def test_empty_reference(self):
        with pytest.raises(ValueError):
            wer("something", "")

    def test_zero_iff_tokens_equal(self):
        assert wer("The CAT!", "the cat").wer == 0.0
        assert wer("the cat", "the cats").wer > 0.0

    def test_matches_brute_force_short(self):
        # Full sweep (length <= 5 over 3 symbols) runs in the acceptance suite;
        # spot-check a smaller slice here.
        vocab = ["a", "b", "c"]
        seqs = [list(s) for n in range(4) for s in itertools.product(vocab, repeat=n)]
        for hyp in seqs:
            for ref in seqs:
                if not ref:
                    continue
                got = corpus_wer([(" ".join(hyp), " ".join(ref))])
                expected = brute_force_distance(hyp, ref)
                assert got.substitutions + got.deletions + got.insertions == expected

    def test_corpus_pooling(self):
        score = corpus_wer([("a b", "a b"), ("a", "a b c")])
        assert score.deletions == 2
        assert score.ref_words == 5
        assert score.wer == pytest.approx(2 / 5)


class TestLatencyStats:
    def test_three_statistics(self):
        stats = latency_stats([(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)])
        assert stats.per_clip_mean_s == pytest.approx(0.2)
        assert stats.duration_weighted_s == pytest.approx((0.1 + 0.4 + 0.9) / 6)
        assert stats.rtf == pytest.approx(0.1)
        assert stats.n == 3

    def test_single_record(self):
        stats = latency_stats([(0.5, 2.0)])
        assert stats.per_clip_mean_s == 0.5
        assert stats.duration_weighted_s == 0.5
        assert stats.rtf == 0.25

    def test_equal_durations_collapse(self):
        stats = latency_stats([(0.1, 2.0), (0.5, 2.0)])
        assert stats.duration_weighted_s == pytest.approx(stats.per_clip_mean_s)

    def test_order_invariance(self):
        records = [(0.1, 1.0), (0.4, 2.5), (0.2, 0.5)]
        a = latency_stats(records)
        b = latency_stats(records[::-1])
        assert a.rtf == pytest.approx(b.rtf)
        assert a.duration_weighted_s == pytest.approx(b.duration_weighted_s)

    def test_empty(self):
        with pytest.raises(ValueError):
            latency_stats([])


class TestCosineSimilarity:
    def test_identity_exact(self):
        emb = SpeakerEmbedding((0.3, -0.4, 0.5), 3)
        assert cosine_similarity(emb, emb) == 1.0

    def test_orthogonal(self):
        a = SpeakerEmbedding((1.0, 0.0), 2)
        b = SpeakerEmbedding((0.0, 1.0), 2)
        assert cosine_similarity(a, b) == 0.0

    def test_hand_value(self):
        a = SpeakerEmbedding((1.0, 0.0), 2)
        b = SpeakerEmbedding((1.0, 1.0), 2)
        assert cosine_similarity(a, b) == pytest.approx(0.70710678, abs=1e-8)

    def test_symmetry_and_scale_invariance(self):
        a = SpeakerEmbedding((0.2, 0.5, -0.1), 3)
        b = SpeakerEmbedding((-0.3, 0.8, 0.4), 3)
        assert cosine_similarity(a, b) == pytest.approx(cosine_similarity(b, a), abs=1e-15)
        scaled = SpeakerEmbedding(tuple(3.0 * v for v in a.vector), 3)
        assert cosine_similarity(scaled, b) == pytest.approx(cosine_similarity(a, b), abs=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            cosine_similarity(SpeakerEmbedding((1.0,), 1), SpeakerEmbedding((1.0, 0.0), 2))

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            cosine_similarity(SpeakerEmbedding((0.0, 0.0), 2), SpeakerEmbedding((1.0, 0.0), 2))
