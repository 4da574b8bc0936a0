"""The cascade executor: ASR -> MT -> TTS -> optional voice conversion.

The stage order is fixed; only the voice-conversion step is switchable
(preserve_prosody=False is the vanilla-TTS ablation).  Empty intermediate
text flows through rather than erroring -- the harness measures such
failures instead of masking them.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from time import perf_counter
from typing import Callable

from .core import AudioClip, DecodeParams, LanguageCode, TranslationResult, Utterance, read_wav


class StageError(RuntimeError):
    """A backend stage failed; carries the failing stage's name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class StageBackends:
    """The five stage capabilities the cascade composes.

    Backends declaring deterministic=True must be pure functions of their
    inputs; all mocks are.  A backend set may additionally expose
    pop_server_s(stage) to report server-side processing time (see the
    remote client).
    """

    asr: Callable[[AudioClip, LanguageCode, DecodeParams], str]
    mt: Callable[[str, LanguageCode, LanguageCode], str]
    tts: Callable[[str, LanguageCode], AudioClip]
    vc: Callable[[AudioClip, AudioClip], AudioClip]
    embed: Callable[[AudioClip], "object"]
    deterministic: bool = False


@dataclass(frozen=True)
class BackendSelection:
    """mock | remote; remote carries one URL per stage."""

    mode: str = "mock"
    urls: dict[str, str] = field(default_factory=dict)
    lexicon_path: str | None = None
    noise_p: float = 0.0
    noise_seed: int = 0
    timeout_s: float = 60.0
    retries: int = 2
    backoff_s: float = 0.5


@dataclass(frozen=True)
class PipelineConfig:
    source_lang: LanguageCode
    target_lang: LanguageCode
    preserve_prosody: bool = True
    asr_decode: DecodeParams = field(default_factory=DecodeParams)
    backend: BackendSelection = field(default_factory=BackendSelection)
    parallelism: int = 1

    def __post_init__(self):
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.backend.mode == "remote":
            needed = ["asr", "mt", "tts"] + (["vc"] if self.preserve_prosody else [])
            missing = [s for s in needed if s not in self.backend.urls]
            if missing:
                raise ValueError(f"remote backend missing URLs for stages: {missing}")

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        backend_raw = dict(raw.get("backend", {}))
        if "base_url" in backend_raw:
            base = backend_raw.pop("base_url")
            backend_raw.setdefault("urls", {s: base for s in ("asr", "mt", "tts", "vc", "embed")})
        noise = backend_raw.pop("noise", None)
        if noise:
            backend_raw["noise_p"] = noise.get("p", 0.0)
            backend_raw["noise_seed"] = noise.get("seed", 0)
        backend_raw.setdefault("lexicon_path", backend_raw.pop("lexicon", None))
        decode_raw = raw.get("asr_decode", {})
        return cls(
            source_lang=LanguageCode(raw["source_lang"]),
            target_lang=LanguageCode(raw["target_lang"]),
            preserve_prosody=raw.get("preserve_prosody", True),
            asr_decode=DecodeParams(
                temperature=decode_raw.get("temperature", 1.0),
                strategy=decode_raw.get("strategy", "greedy"),
                beam_size=decode_raw.get("beam_size"),
            ),
            backend=BackendSelection(**backend_raw),
            parallelism=raw.get("parallelism", 1),
        )

    @classmethod
    def from_json_file(cls, path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def build_backends(config: PipelineConfig) -> StageBackends:
    """Instantiate the backend set named by the config."""
    sel = config.backend
    if sel.mode == "mock":
        from .mocks import NoiseSpec, load_lexicon, mock_backends

        lexicon = load_lexicon(sel.lexicon_path) if sel.lexicon_path else None
        noise = NoiseSpec(sel.noise_p, sel.noise_seed) if sel.noise_p > 0 else None
        return mock_backends(lexicon=lexicon, noise=noise)
    if sel.mode == "remote":
        from .remote import RemoteBackendSet, RemoteEndpoint

        endpoints = {
            stage: RemoteEndpoint(url, sel.timeout_s, sel.retries, sel.backoff_s)
            for stage, url in sel.urls.items()
        }
        return RemoteBackendSet(endpoints)
    raise ValueError(f"unknown backend mode: {sel.mode!r}")


def run_cascade(clip: AudioClip, config: PipelineConfig, backends: StageBackends,
                utterance_id: str = "") -> TranslationResult:
    """Run one clip through the full cascade, timing each stage."""
    if len(clip.samples) == 0:
        raise ValueError("clip entering the cascade must be non-empty")

    timings: dict[str, float] = {}
    wall: dict[str, float] = {}
    pop_server = getattr(backends, "pop_server_s", None)

    def timed(stage, fn, *args):
        t0 = perf_counter()
        try:
            out = fn(*args)
        except Exception as exc:
            raise StageError(stage, exc) from exc
        elapsed = perf_counter() - t0
        wall[stage] = elapsed
        server_s = pop_server(stage) if pop_server is not None else None
        timings[stage] = server_s if server_s is not None else elapsed
        return out

    start = perf_counter()
    transcript = timed("asr", backends.asr, clip, config.source_lang, config.asr_decode)
    translation = timed("mt", backends.mt, transcript, config.source_lang, config.target_lang)
    tts_audio = timed("tts", backends.tts, translation, config.target_lang)
    if config.preserve_prosody:
        output_audio = timed("vc", backends.vc, tts_audio, clip)
    else:
        output_audio = tts_audio
    total = perf_counter() - start

    return TranslationResult(
        utterance_id=utterance_id,
        transcript=transcript,
        translation=translation,
        tts_audio=tts_audio,
        output_audio=output_audio,
        stage_timings=timings,
        total_latency_s=total,
        wall_timings=wall,
    )


@dataclass(frozen=True)
class BatchItem:
    """One utterance's outcome; exactly one of result/error is set."""

    utterance_id: str
    result: TranslationResult | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def run_batch(utterances: list[Utterance], config: PipelineConfig,
              backends: StageBackends) -> list[BatchItem]:
    """Run a batch, up to config.parallelism clips at a time.

    Output order always matches input order; one bad utterance never
    aborts the rest.
    """

    def one(utt: Utterance) -> BatchItem:
        try:
            clip = read_wav(utt.audio_path)
            result = run_cascade(clip, config, backends, utterance_id=utt.id)
            return BatchItem(utt.id, result=result)
        except Exception as exc:
            return BatchItem(utt.id, error=str(exc))

    if config.parallelism == 1:
        return [one(u) for u in utterances]
    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        return list(pool.map(one, utterances))
