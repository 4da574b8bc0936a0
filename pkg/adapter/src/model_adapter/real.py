"""Optional real-model backends.

Thin wiring over Hugging Face pipelines: each configured stage lazily
loads its model on first use and serializes calls through a per-stage
lock.  The heavy dependencies live behind the `real` extra; importing
this module without them installed raises only when a stage is called.

Only ASR and MT are wired; the mock stays the reference for TTS, voice
conversion, and embeddings.
"""

import base64
import io
import threading
import wave

from .config import AdapterConfig
from .mock import BadRequest, _audio_field, _echo_decode


class NotImplementedStage(Exception):
    """Stage has no real model configured or wired; maps to 501."""


class RealStages:
    def __init__(self, config: AdapterConfig):
        self.config = config
        self._pipelines: dict[str, object] = {}
        self._locks = {stage: threading.Lock() for stage in config.models}

    def _pipeline(self, stage: str, task: str):
        model = self.config.models.get(stage)
        if model is None:
            raise NotImplementedStage(f"no model configured for stage '{stage}'")
        with self._locks[stage]:
            if stage not in self._pipelines:
                try:
                    from transformers import pipeline
                except ImportError as exc:
                    raise NotImplementedStage(
                        "real mode needs the 'real' extra (transformers, torch)") from exc
                self._pipelines[stage] = pipeline(task, model=model)
            return self._pipelines[stage]

    def asr(self, payload: dict) -> dict:
        clip = _audio_field(payload, "audio")
        payload["language"]
        pipe = self._pipeline("asr", "automatic-speech-recognition")
        buf = io.BytesIO()
        with wave.open(buf, "wb") as out:
            out.setnchannels(1)
            out.setsampwidth(2)
            out.setframerate(clip.sample_rate)
            out.writeframes(clip.samples)
        with self._locks["asr"]:
            result = pipe(buf.getvalue())
        return {"text": result["text"].strip(), "decode": _echo_decode(payload)}

    def translate(self, payload: dict) -> dict:
        text = payload["text"]
        src, tgt = payload["source_lang"], payload["target_lang"]
        pipe = self._pipeline("mt", f"translation_{src}_to_{tgt}")
        with self._locks["mt"]:
            result = pipe(text)
        return {"text": result[0]["translation_text"]}

    def tts(self, payload: dict) -> dict:
        raise NotImplementedStage("real TTS is not wired; use mock mode")

    def convert(self, payload: dict) -> dict:
        raise NotImplementedStage("real voice conversion is not wired; use mock mode")

    def embed(self, payload: dict) -> dict:
        raise NotImplementedStage("real embeddings are not wired; use mock mode")
