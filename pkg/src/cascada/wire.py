"""Wire-protocol encoding shared by the remote client and the mock server.

All bodies are UTF-8 JSON in canonical form (sorted keys, compact
separators) so request/response fixtures can be compared byte-for-byte.
Audio travels as base64 of a complete WAV file as defined in core.
"""

import base64
import json

from .core import AudioClip, DecodeParams, clip_from_wav_bytes, clip_to_wav_bytes

ASR_PATH = "/v1/asr"
TRANSLATE_PATH = "/v1/translate"
TTS_PATH = "/v1/tts"
CONVERT_PATH = "/v1/convert"
EMBED_PATH = "/v1/embed"
HEALTH_PATH = "/v1/health"

ALL_CAPABILITIES = ["asr", "mt", "tts", "vc", "embed"]


def canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def encode_audio(clip: AudioClip) -> str:
    return base64.b64encode(clip_to_wav_bytes(clip)).decode("ascii")


def decode_audio(b64: str) -> AudioClip:
    return clip_from_wav_bytes(base64.b64decode(b64))


def decode_params_payload(decode: DecodeParams) -> dict:
    payload = {"temperature": decode.temperature, "strategy": decode.strategy}
    if decode.strategy == "beam":
        payload["beam_size"] = decode.beam_size
    return payload


def asr_request(clip: AudioClip, language: str, decode: DecodeParams) -> dict:
    return {"audio": encode_audio(clip), "language": str(language),
            "decode": decode_params_payload(decode)}


def translate_request(text: str, source_lang: str, target_lang: str) -> dict:
    return {"text": text, "source_lang": str(source_lang), "target_lang": str(target_lang)}


def tts_request(text: str, language: str, voice: str | None = None) -> dict:
    payload = {"text": text, "language": str(language)}
    if voice is not None:
        payload["voice"] = voice
    return payload


def convert_request(content: AudioClip, reference: AudioClip) -> dict:
    return {"content_audio": encode_audio(content), "reference_audio": encode_audio(reference)}


def embed_request(clip: AudioClip) -> dict:
    return {"audio": encode_audio(clip)}


def error_payload(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}
