#!/usr/bin/env python3
"""Regenerate the golden wire-protocol fixture corpus in fixtures/wire/.

Each fixture file freezes one request/response pair in canonical JSON.
The remote client must serialize requests byte-identically, and the
reference adapter's mock mode must reproduce the responses byte-identically.
Run from the repository root; output is committed, not generated at test time.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from cascada import wire
from cascada.core import AudioClip, DecodeParams
from cascada.mocks import hash_embed, tone_tts

OUT_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "wire"

MOCK_ASR_TEXT = "mock transcript"
MOCK_TTS_SAMPLES = 1600
MOCK_TTS_TAG = "mock-tts"


def mock_tts_clip() -> AudioClip:
    return AudioClip(np.zeros(MOCK_TTS_SAMPLES, dtype=np.int16), 16000, MOCK_TTS_TAG)


def decode_echo(decode: DecodeParams) -> dict:
    return wire.decode_params_payload(decode)


def retag(clip: AudioClip, reference: AudioClip) -> AudioClip:
    tag = reference.speaker_tag if reference.speaker_tag is not None else "unknown"
    return clip.with_tag(tag)


def embedding_for(clip: AudioClip) -> list[float]:
    return list(hash_embed(clip).vector)


def main():
    greedy = DecodeParams(1.0, "greedy")
    beam = DecodeParams(0.0, "beam", beam_size=5)
    hola = tone_tts("hola", "es")
    tagged = tone_tts("ab", "en").with_tag("spk1")
    content = tone_tts("ab", "en")  # tag tts-default
    ref_spk7 = tone_tts("c", "es").with_tag("spk7")
    ref_untagged = AudioClip(np.array([1, 2, 3, 4], dtype=np.int16), 16000)

    fixtures = [
        {
            "name": "asr_greedy_temp1",
            "method": "POST", "path": wire.ASR_PATH, "status": 200,
            "request": wire.asr_request(hola, "es", greedy),
            "response": {"decode": decode_echo(greedy), "processing_ms": 0.0,
                         "text": MOCK_ASR_TEXT},
        },
        {
            "name": "asr_beam",
            "method": "POST", "path": wire.ASR_PATH, "status": 200,
            "request": wire.asr_request(tagged, "en", beam),
            "response": {"decode": decode_echo(beam), "processing_ms": 0.0,
                         "text": MOCK_ASR_TEXT},
        },
        {
            "name": "translate_echo_hola",
            "method": "POST", "path": wire.TRANSLATE_PATH, "status": 200,
            "request": wire.translate_request("hola", "es", "en"),
            "response": {"text": "hola"},
        },
        {
            "name": "translate_echo_sentence",
            "method": "POST", "path": wire.TRANSLATE_PATH, "status": 200,
            "request": wire.translate_request("the quick brown fox", "en", "de"),
            "response": {"text": "the quick brown fox"},
        },
        {
            "name": "tts_plain",
            "method": "POST", "path": wire.TTS_PATH, "status": 200,
            "request": wire.tts_request("hello world", "en"),
            "response": {"audio": wire.encode_audio(mock_tts_clip())},
        },
        {
            "name": "tts_with_voice",
            "method": "POST", "path": wire.TTS_PATH, "status": 200,
            "request": wire.tts_request("hola", "es", voice="spk7"),
            "response": {"audio": wire.encode_audio(mock_tts_clip())},
        },
        {
            "name": "convert_tag_transfer",
            "method": "POST", "path": wire.CONVERT_PATH, "status": 200,
            "request": wire.convert_request(content, ref_spk7),
            "response": {"audio": wire.encode_audio(retag(content, ref_spk7))},
        },
        {
            "name": "convert_untagged_reference",
            "method": "POST", "path": wire.CONVERT_PATH, "status": 200,
            "request": wire.convert_request(content, ref_untagged),
            "response": {"audio": wire.encode_audio(retag(content, ref_untagged))},
        },
        {
            "name": "embed_tagged",
            "method": "POST", "path": wire.EMBED_PATH, "status": 200,
            "request": wire.embed_request(tagged),
            "response": {"embedding": embedding_for(tagged)},
        },
        {
            "name": "embed_untagged",
            "method": "POST", "path": wire.EMBED_PATH, "status": 200,
            "request": wire.embed_request(ref_untagged),
            "response": {"embedding": embedding_for(ref_untagged)},
        },
        {
            "name": "health",
            "method": "GET", "path": wire.HEALTH_PATH, "status": 200,
            "request": None,
            "response": {"capabilities": list(wire.ALL_CAPABILITIES), "mode": "mock",
                         "models": {s: "mock" for s in wire.ALL_CAPABILITIES},
                         "status": "ok"},
        },
        {
            "name": "error_malformed_json",
            "method": "POST", "path": wire.TRANSLATE_PATH, "status": 400,
            "request": None,
            "request_raw": "this is not json",
            "response": wire.error_payload("bad_request", "body is not valid JSON"),
        },
        {
            "name": "error_missing_field",
            "method": "POST", "path": wire.ASR_PATH, "status": 400,
            "request": {"language": "es"},
            "response": wire.error_payload("bad_request", "missing field 'audio'"),
        },
    ]

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for fixture in fixtures:
        path = OUT_DIR / f"{fixture['name']}.json"
        path.write_text(json.dumps(fixture, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
