"""Executable evaluation protocols.

Covers manifest ingestion, seeded repeated sampling, back-transcription
BLEU over the cascade, ASR WER/latency benchmarking, and MOS survey
aggregation.  Sampling and scoring are bit-reproducible for a fixed seed
regardless of platform or parallelism.
"""

import csv
import json
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from ._rng import MASK64, SplitMix64
from .core import DecodeParams, LanguageCode, Utterance, read_wav
from .metrics import BleuScore, LatencyStats, WerScore, corpus_bleu, corpus_wer, latency_stats
from .pipeline import PipelineConfig, StageBackends, run_cascade

# Repeated-sampling standard deviations in published per-language BLEU runs
# are quoted as falling in this band; reports annotate (never assert) it.
REFERENCE_STD_BAND = (0.5, 1.5)

SURVEY_SYSTEMS = ("gt", "vanilla", "crossvoice")
SURVEY_QUESTIONS = (1, 2, 3)
VALID_RATINGS = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}


class ManifestError(ValueError):
    pass


class SurveyError(ValueError):
    pass


@dataclass(frozen=True)
class Manifest:
    task_name: str
    utterances: tuple[Utterance, ...]

    def __post_init__(self):
        if not self.utterances:
            raise ManifestError("manifest is empty")
        seen = set()
        pair = None
        for utt in self.utterances:
            if utt.id in seen:
                raise ManifestError(f"duplicate utterance id: {utt.id!r}")
            seen.add(utt.id)
            this_pair = (utt.source_lang, utt.target_lang)
            if pair is None:
                pair = this_pair
            elif this_pair != pair:
                raise ManifestError(
                    f"mixed language pairs in one task: {pair} vs {this_pair} (id {utt.id!r})")

    def by_id(self, utt_id: str) -> Utterance:
        for utt in self.utterances:
            if utt.id == utt_id:
                return utt
        raise KeyError(utt_id)


@dataclass(frozen=True)
class SamplingPlan:
    clips_per_iteration: int
    iterations: int
    seed: int

    def __post_init__(self):
        if self.clips_per_iteration < 1 or self.iterations < 1:
            raise ValueError("clips_per_iteration and iterations must be >= 1")


@dataclass(frozen=True)
class SamplingSummary:
    per_iteration_scores: tuple[float, ...]
    mean: float
    std: float

    @classmethod
    def from_scores(cls, scores) -> "SamplingSummary":
        scores = tuple(float(s) for s in scores)
        mean = sum(scores) / len(scores)
        std = statistics.stdev(scores) if len(scores) > 1 else 0.0
        return cls(scores, mean, std)

    @property
    def std_in_reference_band(self) -> bool:
        low, high = REFERENCE_STD_BAND
        return low < self.std < high


def load_manifest(path, task_name: str | None = None) -> Manifest:
    """Load a JSON-Lines manifest; relative audio paths resolve against it."""
    path = Path(path)
    base = path.parent
    utterances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except ValueError as exc:
                raise ManifestError(f"{path}:{lineno}: invalid JSON: {exc}")
            for key in ("id", "audio_path", "source_lang", "target_lang"):
                if key not in row:
                    raise ManifestError(f"{path}:{lineno}: missing required field {key!r}")
            audio_path = Path(row["audio_path"])
            if not audio_path.is_absolute():
                audio_path = base / audio_path
            utterances.append(Utterance(
                id=row["id"],
                audio_path=audio_path,
                source_lang=LanguageCode(row["source_lang"]),
                target_lang=LanguageCode(row["target_lang"]),
                source_text=row.get("source_text"),
                reference_translation=row.get("reference_translation"),
                speaker_id=row.get("speaker_id"),
            ))
    return Manifest(task_name or path.stem, tuple(utterances))


def sample_iterations(manifest: Manifest, plan: SamplingPlan) -> list[list[str]]:
    """k seeded draws of n distinct utterance ids.

    Iteration j runs a partial Fisher-Yates over the ids sorted
    lexicographically, driven by SplitMix64(seed + j); the result is a pure
    function of (sorted ids, plan).
    """
    ids = sorted(u.id for u in manifest.utterances)
    n = plan.clips_per_iteration
    if n > len(ids):
        raise ValueError(f"sample of {n} larger than manifest of {len(ids)}")
    subsets = []
    for j in range(plan.iterations):
        rng = SplitMix64((plan.seed + j) & MASK64)
        pool = list(ids)
        for i in range(n):
            swap = i + rng.next_below(len(pool) - i)
            pool[i], pool[swap] = pool[swap], pool[i]
        subsets.append(pool[:n])
    return subsets


@dataclass(frozen=True)
class S2stBleuResult:
    task_name: str
    summary: SamplingSummary
    per_iteration: tuple[BleuScore, ...]
    subsets: tuple[tuple[str, ...], ...]
    plan: SamplingPlan


def eval_s2st_bleu(manifest: Manifest, config: PipelineConfig, backends: StageBackends,
                   plan: SamplingPlan, eval_asr=None,
                   eval_decode: DecodeParams | None = None) -> S2stBleuResult:
    """Back-transcription BLEU over k seeded samples of the manifest.

    Each sampled clip runs the cascade; the output audio is transcribed by
    eval_asr (tone decoder by default, temperature 1.0 + greedy) and the
    transcripts are scored with corpus BLEU against the reference
    translations.  The summary mean over iterations is the system's BLEU-c.
    """
    if eval_asr is None:
        from .mocks import tone_asr
        eval_asr = tone_asr
    if eval_decode is None:
        eval_decode = DecodeParams(temperature=1.0, strategy="greedy")

    subsets = sample_iterations(manifest, plan)
    per_iteration = []
    for subset in subsets:
        hyps, refs = [], []
        for utt_id in subset:
            utt = manifest.by_id(utt_id)
            if utt.reference_translation is None:
                raise ValueError(f"utterance {utt.id!r} has no reference_translation")
            try:
                clip = read_wav(utt.audio_path)
                result = run_cascade(clip, config, backends, utterance_id=utt.id)
                hyps.append(eval_asr(result.output_audio, utt.target_lang, eval_decode))
            except Exception as exc:
                raise RuntimeError(f"evaluation failed on clip {utt.id!r}: {exc}") from exc
            refs.append(utt.reference_translation)
        per_iteration.append(corpus_bleu(hyps, refs))

    summary = SamplingSummary.from_scores([b.score for b in per_iteration])
    return S2stBleuResult(manifest.task_name, summary, tuple(per_iteration),
                          tuple(tuple(s) for s in subsets), plan)


@dataclass(frozen=True)
class AsrBenchRow:
    model: str
    wer: WerScore | None
    latency: LatencyStats | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def bench_asr(manifest: Manifest, asr, decode: DecodeParams | None = None,
              model_name: str = "asr") -> AsrBenchRow:
    """Time and score one ASR capability over a manifest with source texts."""
    if decode is None:
        decode = DecodeParams(temperature=1.0, strategy="greedy")
    pairs = []
    records = []
    from time import perf_counter
    for utt in manifest.utterances:
        if utt.source_text is None:
            raise ValueError(f"utterance {utt.id!r} has no source_text")
        clip = read_wav(utt.audio_path)
        t0 = perf_counter()
        transcript = asr(clip, utt.source_lang, decode)
        elapsed = perf_counter() - t0
        pairs.append((transcript, utt.source_text))
        records.append((elapsed, clip.duration_s))
    return AsrBenchRow(model_name, corpus_wer(pairs), latency_stats(records))


# --- MOS survey aggregation -------------------------------------------------

@dataclass(frozen=True)
class SurveyResponse:
    respondent_id: str
    clip_id: str
    task_name: str
    system: str
    question: int
    rating: float


@dataclass(frozen=True)
class CellStats:
    mean: float
    std: float
    ci95_halfwidth: float
    n: int

    @classmethod
    def from_ratings(cls, ratings) -> "CellStats":
        n = len(ratings)
        mean = sum(ratings) / n
        std = statistics.stdev(ratings) if n > 1 else 0.0
        return cls(mean, std, 1.96 * std / math.sqrt(n), n)


@dataclass(frozen=True)
class MosReport:
    cells: dict[tuple[str, str, int], CellStats]
    ratings: dict[tuple[str, str, int], tuple[float, ...]]
    gt_reference: dict[str, float] = field(default_factory=dict)

    def tasks(self) -> list[str]:
        return sorted({task for task, _, _ in self.cells})

    def system_stats(self, task: str, system: str,
                     questions: tuple[int, ...] = (1, 2)) -> CellStats | None:
        pooled = []
        for q in questions:
            pooled.extend(self.ratings.get((task, system, q), ()))
        return CellStats.from_ratings(pooled) if pooled else None

    def headline(self, system: str = "crossvoice",
                 questions: tuple[int, ...] = (1, 2)) -> float | None:
        """Unweighted mean over tasks of the pooled per-task system score.

        Question 3 (emphasis/intonation) is excluded by default; this
        single number is an interpretive summary, flagged as such in
        rendered reports.
        """
        per_task = [s.mean for t in self.tasks() if (s := self.system_stats(t, system, questions))]
        return sum(per_task) / len(per_task) if per_task else None


def parse_survey_csv(path) -> list[SurveyResponse]:
    """Parse the survey CSV; malformed rows are rejected with line numbers."""
    responses = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"respondent_id", "clip_id", "task", "system", "question", "rating"}
        if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
            raise SurveyError(f"{path}: header must contain {sorted(expected)}")
        for row in reader:
            lineno = reader.line_num
            system = row["system"].strip().lower()
            if system not in SURVEY_SYSTEMS:
                raise SurveyError(f"{path}:{lineno}: unknown system {row['system']!r}")
            try:
                question = int(row["question"])
            except ValueError:
                raise SurveyError(f"{path}:{lineno}: invalid question {row['question']!r}")
            if question not in SURVEY_QUESTIONS:
                raise SurveyError(f"{path}:{lineno}: unknown question {question}")
            try:
                rating = float(row["rating"])
            except ValueError:
                raise SurveyError(f"{path}:{lineno}: invalid rating {row['rating']!r}")
            if rating not in VALID_RATINGS:
                raise SurveyError(
                    f"{path}:{lineno}: rating {rating} is not a half-step value in [1, 4]")
            responses.append(SurveyResponse(
                respondent_id=row["respondent_id"],
                clip_id=row["clip_id"],
                task_name=row["task"],
                system=system,
                question=question,
                rating=rating,
            ))
    if not responses:
        raise SurveyError(f"{path}: no responses")
    return responses


def aggregate_mos(path, gt_reference: dict[str, float] | None = None) -> MosReport:
    """Aggregate a survey CSV into per-(task, system, question) statistics."""
    responses = parse_survey_csv(path)
    buckets: dict[tuple[str, str, int], list[float]] = {}
    for resp in responses:
        buckets.setdefault((resp.task_name, resp.system, resp.question), []).append(resp.rating)
    cells = {key: CellStats.from_ratings(vals) for key, vals in buckets.items()}
    ratings = {key: tuple(vals) for key, vals in buckets.items()}
    return MosReport(cells, ratings, gt_reference or {})
