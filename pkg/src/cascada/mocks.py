"""Deterministic stage backends for closed-loop, weight-free testing.

A tone codec carries text through audio losslessly: the TTS renders one
sine segment per character and the matching ASR decodes it back with a
Goertzel-style magnitude argmax.  Speaker identity travels as a metadata
tag, so prosody preservation is testable as an information-flow property
without any DSP.
"""

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._rng import SplitMix64, fnv1a64
from .core import AudioClip, SpeakerEmbedding

SAMPLE_RATE = 16000
SEGMENT_S = 0.08
SEGMENT_SAMPLES = int(SEGMENT_S * SAMPLE_RATE)  # 1280
BASE_FREQ = 400.0
FREQ_STEP = 20.0
ERROR_WORD = "xerr"

_BASE_SYMBOLS = "abcdefghijklmnopqrstuvwxyz0123456789 .,?!'-:;"
# Padded to 64 entries with private-use placeholders that normalization
# can never produce.
ALPHABET = _BASE_SYMBOLS + "".join(chr(0xE000 + i) for i in range(64 - len(_BASE_SYMBOLS)))
_CHAR_INDEX = {c: i for i, c in enumerate(ALPHABET)}
FREQUENCIES = np.array([BASE_FREQ + FREQ_STEP * i for i in range(64)])


class MockAudioError(ValueError):
    """Clip does not follow the tone-codec conventions."""


@dataclass(frozen=True)
class NoiseSpec:
    """Word-level corruption: each word becomes ERROR_WORD with probability p."""

    p: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("word error rate must be in [0, 1]")


@lru_cache(maxsize=128)
def _tone_segment(index: int) -> np.ndarray:
    t = np.arange(SEGMENT_SAMPLES)
    wave = np.sin(2.0 * np.pi * FREQUENCIES[index] * t / SAMPLE_RATE)
    return np.round(32767.0 * wave).astype(np.int16)


def tone_tts(text: str, lang) -> AudioClip:
    """Encode text as one 0.08 s sine segment per character at 16 kHz."""
    if not text:
        raise ValueError("cannot synthesize empty text")
    normalized = [c if c in _CHAR_INDEX else " " for c in text.lower()]
    segments = [_tone_segment(_CHAR_INDEX[c]) for c in normalized]
    return AudioClip(np.concatenate(segments), SAMPLE_RATE, speaker_tag="tts-default")


def goertzel_magnitude(samples: np.ndarray, freq: float, rate: int) -> float:
    """Classic Goertzel recurrence; reference implementation for one tone."""
    coeff = 2.0 * np.cos(2.0 * np.pi * freq / rate)
    s_prev = s_prev2 = 0.0
    for x in np.asarray(samples, dtype=np.float64):
        s = x + coeff * s_prev - s_prev2
        s_prev2 = s_prev
        s_prev = s
    power = s_prev * s_prev + s_prev2 * s_prev2 - coeff * s_prev * s_prev2
    return float(np.sqrt(max(power, 0.0)))


@lru_cache(maxsize=1)
def _tone_basis() -> np.ndarray:
    t = np.arange(SEGMENT_SAMPLES)
    return np.exp(-2.0j * np.pi * np.outer(t, FREQUENCIES) / SAMPLE_RATE)


def tone_asr(clip: AudioClip, lang, decode) -> str:
    """Decode a tone-codec clip back to text.

    Per segment the Goertzel magnitude is evaluated at all 64 candidate
    frequencies (via the equivalent single-bin DFT projection, vectorized);
    argmax picks the character, ties resolving to the lowest index.
    Decode params are accepted for interface parity and ignored.
    """
    if clip.sample_rate != SAMPLE_RATE:
        raise MockAudioError(f"expected {SAMPLE_RATE} Hz, got {clip.sample_rate}")
    if len(clip.samples) == 0 or len(clip.samples) % SEGMENT_SAMPLES != 0:
        raise MockAudioError(f"clip length must be a positive multiple of {SEGMENT_SAMPLES}")
    segments = np.asarray(clip.samples, dtype=np.float64).reshape(-1, SEGMENT_SAMPLES)
    magnitudes = np.abs(segments @ _tone_basis())
    indices = np.argmax(magnitudes, axis=1)  # np.argmax takes the first (lowest) max
    return "".join(ALPHABET[i] for i in indices)


def noisy_asr(clip: AudioClip, lang, decode, spec: NoiseSpec) -> str:
    """tone_asr with seeded word-level corruption for WER calibration tests.

    Word i is replaced iff the first draw of SplitMix64(seed XOR i) falls
    below p; fully determined by (clip, spec).
    """
    words = tone_asr(clip, lang, decode).split()
    out = []
    for i, word in enumerate(words):
        rng = SplitMix64(spec.seed ^ i)
        out.append(ERROR_WORD if rng.next_float() < spec.p else word)
    return " ".join(out)


def dict_mt(text: str, src, tgt, lexicon: dict[str, str]) -> str:
    """Word-for-word dictionary translation; unknown words pass through."""
    return " ".join(lexicon.get(word, word) for word in text.split())


def load_lexicon(path) -> dict[str, str]:
    """Load "source<TAB>target" pairs; '#' starts a comment line."""
    lexicon = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'source<TAB>target'")
            lexicon[parts[0]] = parts[1]
    return lexicon


def fingerprint_vc(content: AudioClip, reference: AudioClip) -> AudioClip:
    """Voice conversion as pure identity transfer: content samples, reference tag."""
    return content.with_tag(reference.speaker_tag if reference.speaker_tag is not None else "unknown")


def hash_embed(clip: AudioClip) -> SpeakerEmbedding:
    """192-dim unit vector determined entirely by the clip's speaker tag."""
    tag = clip.speaker_tag if clip.speaker_tag is not None else "unknown"
    rng = SplitMix64(fnv1a64(tag.encode("utf-8")))
    raw = [rng.next_float() * 2.0 - 1.0 for _ in range(192)]
    norm = sum(v * v for v in raw) ** 0.5
    return SpeakerEmbedding(tuple(v / norm for v in raw), 192)


def mock_backends(lexicon: dict[str, str] | None = None,
                  noise: NoiseSpec | None = None,
                  delay_s: float = 0.0):
    """A full deterministic StageBackends set over the mocks above."""
    from .pipeline import StageBackends

    lex = lexicon if lexicon is not None else {}

    def asr(clip, lang, decode):
        if delay_s:
            time.sleep(delay_s)
        if noise is not None:
            return noisy_asr(clip, lang, decode, noise)
        return tone_asr(clip, lang, decode)

    return StageBackends(
        asr=asr,
        mt=lambda text, src, tgt: dict_mt(text, src, tgt, lex),
        tts=tone_tts,
        vc=fingerprint_vc,
        embed=hash_embed,
        deterministic=True,
    )
