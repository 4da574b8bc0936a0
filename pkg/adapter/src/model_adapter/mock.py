"""Weight-free mock implementations of the five model stages.

Mock responses are frozen by the golden wire fixtures: ASR always returns
MOCK_ASR_TEXT with the decode parameters echoed back and processing_ms
pinned to 0.0, translation echoes the input text, TTS returns 0.1 s of
silence tagged "mock-tts", voice conversion re-tags the content clip with
the reference clip's speaker tag, and embeddings hash the speaker tag.
"""

import base64

from .rng import SplitMix64, fnv1a64
from .wav import Clip, WavError, decode, encode

MOCK_ASR_TEXT = "mock transcript"
MOCK_TTS_SAMPLES = 1600
MOCK_TTS_RATE = 16000
MOCK_TTS_TAG = "mock-tts"
EMBED_DIM = 192

STAGES = ("asr", "mt", "tts", "vc", "embed")


class BadRequest(Exception):
    """Client-side input problem; maps to a 400 response."""


def _audio_field(payload: dict, field: str) -> Clip:
    value = payload[field]
    try:
        raw = base64.b64decode(value, validate=True)
    except Exception as exc:
        raise BadRequest(f"field '{field}' is not valid base64") from exc
    try:
        return decode(raw)
    except WavError as exc:
        raise BadRequest(f"field '{field}': {exc}") from exc


def _echo_decode(payload: dict) -> dict:
    raw = payload.get("decode") or {}
    echoed = {
        "temperature": raw.get("temperature", 1.0),
        "strategy": raw.get("strategy", "greedy"),
    }
    if echoed["strategy"] == "beam" and "beam_size" in raw:
        echoed["beam_size"] = raw["beam_size"]
    return echoed


def hash_embedding(tag: str | None) -> list[float]:
    """192-dim unit vector determined entirely by the speaker tag."""
    rng = SplitMix64(fnv1a64((tag if tag is not None else "unknown").encode("utf-8")))
    raw = [rng.next_float() * 2.0 - 1.0 for _ in range(EMBED_DIM)]
    norm = sum(v * v for v in raw) ** 0.5
    return [v / norm for v in raw]


def asr(payload: dict) -> dict:
    _audio_field(payload, "audio")
    payload["language"]
    return {"text": MOCK_ASR_TEXT, "decode": _echo_decode(payload), "processing_ms": 0.0}


def translate(payload: dict) -> dict:
    text = payload["text"]
    payload["source_lang"]
    payload["target_lang"]
    return {"text": text}


def tts(payload: dict) -> dict:
    payload["text"]
    payload["language"]
    clip = Clip(b"\x00" * (2 * MOCK_TTS_SAMPLES), MOCK_TTS_RATE, MOCK_TTS_TAG)
    return {"audio": base64.b64encode(encode(clip)).decode("ascii")}


def convert(payload: dict) -> dict:
    content = _audio_field(payload, "content_audio")
    reference = _audio_field(payload, "reference_audio")
    tag = reference.speaker_tag if reference.speaker_tag is not None else "unknown"
    out = Clip(content.samples, content.sample_rate, tag)
    return {"audio": base64.b64encode(encode(out)).decode("ascii")}


def embed(payload: dict) -> dict:
    clip = _audio_field(payload, "audio")
    return {"embedding": hash_embedding(clip.speaker_tag)}
