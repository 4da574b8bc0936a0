"""Cascade speech-to-speech translation orchestrator and evaluation harness."""

from .core import (
    AudioClip,
    DecodeParams,
    LanguageCode,
    SpeakerEmbedding,
    TranslationResult,
    Utterance,
    read_wav,
    write_wav,
)
from .pipeline import PipelineConfig, StageBackends, StageError, run_batch, run_cascade

__all__ = [
    "AudioClip",
    "DecodeParams",
    "LanguageCode",
    "PipelineConfig",
    "SpeakerEmbedding",
    "StageBackends",
    "StageError",
    "TranslationResult",
    "Utterance",
    "read_wav",
    "run_batch",
    "run_cascade",
    "write_wav",
]

__version__ = "0.1.0"
