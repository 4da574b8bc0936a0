"""Translation and ASR quality metrics: corpus BLEU, WER, latency, cosine.

All scores use one pinned tokenization (lowercase, punctuation stripped,
whitespace split) -- BLEU and WER numbers are meaningless without it.
"""

import math
from collections import Counter
from dataclasses import dataclass

_STRIP = str.maketrans("", "", '.,?!;:"()')


def tokenize(text: str) -> list[str]:
    """Lowercase, drop .,?!;:"() and split on whitespace.

    Apostrophes and hyphens stay inside words.
    """
    return text.lower().translate(_STRIP).split()


@dataclass(frozen=True)
class BleuScore:
    score: float                     # 0..100
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_len: int
    ref_len: int


@dataclass(frozen=True)
class WerScore:
    wer: float
    substitutions: int
    deletions: int
    insertions: int
    ref_words: int


@dataclass(frozen=True)
class LatencyStats:
    per_clip_mean_s: float
    duration_weighted_s: float
    rtf: float
    n: int


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hypotheses: list[str], references: list[str]) -> BleuScore:
    """Unsmoothed corpus-level BLEU, n = 1..4, uniform weights, one reference.

    Clipped n-gram counts are pooled over the corpus; any zero pooled
    precision gives score 0.
    """
    if len(hypotheses) != len(references):
        raise ValueError("hypotheses and references must have equal length")
    if not hypotheses:
        raise ValueError("empty corpus")

    matched = [0] * 4
    total = [0] * 4
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = tokenize(hyp)
        ref_tokens = tokenize(ref)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, 5):
            hyp_counts = _ngrams(hyp_tokens, n)
            ref_counts = _ngrams(ref_tokens, n)
            total[n - 1] += sum(hyp_counts.values())
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())

    precisions = tuple(m / t if t else 0.0 for m, t in zip(matched, total))
    if hyp_len == 0:
        return BleuScore(0.0, precisions, 0.0 if ref_len else 1.0, 0, ref_len)

    bp = 1.0 if hyp_len > ref_len else math.exp(1 - ref_len / hyp_len)
    if any(p == 0.0 for p in precisions):
        score = 0.0
    else:
        score = 100.0 * bp * math.exp(sum(0.25 * math.log(p) for p in precisions))
    return BleuScore(score, precisions, bp, hyp_len, ref_len)


def _edit_counts(hyp: list[str], ref: list[str]) -> tuple[int, int, int]:
    """Minimal-cost S/D/I counts; ties broken substitution > deletion > insertion."""
    m, n = len(hyp), len(ref)
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        dist[i][0] = i
    for j in range(n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            sub = dist[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1])
            dele = dist[i][j - 1] + 1
            ins = dist[i - 1][j] + 1
            dist[i][j] = min(sub, dele, ins)

    subs = dels = inss = 0
    i, j = m, n
    while i > 0 or j > 0:
        here = dist[i][j]
        if i > 0 and j > 0 and here == dist[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]):
            subs += hyp[i - 1] != ref[j - 1]
            i -= 1
            j -= 1
        elif j > 0 and here == dist[i][j - 1] + 1:
            dels += 1
            j -= 1
        else:
            inss += 1
            i -= 1
    return subs, dels, inss


def wer(hypothesis: str, reference: str) -> WerScore:
    """Word error rate of one hypothesis against one reference."""
    return corpus_wer([(hypothesis, reference)])


def corpus_wer(pairs: list[tuple[str, str]]) -> WerScore:
    """Pooled WER: S, D, I and reference words summed over all pairs."""
    if not pairs:
        raise ValueError("empty corpus")
    subs = dels = inss = ref_words = 0
    for hyp, ref in pairs:
        ref_tokens = tokenize(ref)
        if not ref_tokens:
            raise ValueError("reference is empty after tokenization")
        s, d, i = _edit_counts(tokenize(hyp), ref_tokens)
        subs += s
        dels += d
        inss += i
        ref_words += len(ref_tokens)
    return WerScore((subs + dels + inss) / ref_words, subs, dels, inss, ref_words)


def latency_stats(records: list[tuple[float, float]]) -> LatencyStats:
    """Latency statistics over (processing_s, clip_duration_s) records.

    Reports all three readings of an "average latency": plain per-clip
    mean, duration-weighted mean, and real-time factor.
    """
    if not records:
        raise ValueError("no latency records")
    for t, d in records:
        if t < 0 or d <= 0:
            raise ValueError("processing times must be >= 0 and durations > 0")
    times = [t for t, _ in records]
    durs = [d for _, d in records]
    return LatencyStats(
        per_clip_mean_s=sum(times) / len(times),
        duration_weighted_s=sum(t * d for t, d in records) / sum(durs),
        rtf=sum(times) / sum(durs),
        n=len(records),
    )


def cosine_similarity(a, b) -> float:
    """Cosine similarity of two embeddings; exactly 1.0 for identical vectors."""
    va, vb = a.vector, b.vector
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} != {b.dim}")
    num = sum(x * y for x, y in zip(va, vb))
    norm_sq_a = sum(x * x for x in va)
    norm_sq_b = sum(y * y for y in vb)
    if norm_sq_a == 0.0 or norm_sq_b == 0.0:
        raise ValueError("cosine similarity undefined for zero vector")
    return num / math.sqrt(norm_sq_a * norm_sq_b)
