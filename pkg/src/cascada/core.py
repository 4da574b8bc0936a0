"""Domain types and lossless mono PCM-16 WAV I/O.

All types are immutable value objects; file I/O is reentrant.  Audio is
mono 16-bit PCM only -- every protocol message carries its own sample
rate, so format conversion is a backend concern, not a core one.

An optional speaker tag rides in a standard LIST/INFO IART chunk so voice
provenance survives file persistence.
"""

import math
import struct
from dataclasses import dataclass, field
from io import BytesIO
from pathlib import Path

import numpy as np


class WavError(ValueError):
    """Base class for WAV parsing/encoding failures."""


class NotWavError(WavError):
    """File is not a RIFF/WAVE container."""


class UnsupportedWavError(WavError):
    """WAVE file is valid but not mono 16-bit PCM."""


class LanguageCode(str):
    """Two-letter lowercase language identifier, e.g. "es", "en"."""

    def __new__(cls, code: str):
        if len(code) != 2 or not code.isascii() or not code.isalpha() or not code.islower():
            raise ValueError(f"invalid language code: {code!r}")
        return super().__new__(cls, code)


@dataclass(frozen=True, eq=False)
class AudioClip:
    """Mono PCM-16 audio with an optional speaker tag."""

    samples: np.ndarray
    sample_rate: int
    speaker_tag: str | None = None

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.int16)
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        if arr.ndim != 1:
            raise ValueError("samples must be one-dimensional (mono)")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate

    def __eq__(self, other) -> bool:
        if not isinstance(other, AudioClip):
            return NotImplemented
        return (
            self.sample_rate == other.sample_rate
            and self.speaker_tag == other.speaker_tag
            and len(self.samples) == len(other.samples)
            and bool(np.array_equal(self.samples, other.samples))
        )

    def with_tag(self, tag: str | None) -> "AudioClip":
        return AudioClip(self.samples, self.sample_rate, tag)


@dataclass(frozen=True)
class Utterance:
    """One manifest row: a clip on disk plus its reference texts."""

    id: str
    audio_path: Path
    source_lang: LanguageCode
    target_lang: LanguageCode
    source_text: str | None = None
    reference_translation: str | None = None
    speaker_id: str | None = None


@dataclass(frozen=True)
class DecodeParams:
    """ASR decoding parameters forwarded to the backend."""

    temperature: float = 1.0
    strategy: str = "greedy"
    beam_size: int | None = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.strategy not in ("greedy", "beam"):
            raise ValueError(f"unknown decode strategy: {self.strategy!r}")
        if self.strategy == "beam":
            if self.beam_size is None or self.beam_size < 1:
                raise ValueError("beam strategy requires a positive beam_size")
        elif self.beam_size is not None:
            object.__setattr__(self, "beam_size", None)


@dataclass(frozen=True)
class SpeakerEmbedding:
    """Fixed-dimension speaker identity vector."""

    vector: tuple[float, ...]
    dim: int = 192

    def __post_init__(self):
        if self.dim != len(self.vector):
            raise ValueError("dim must equal len(vector)")
        if not all(math.isfinite(v) for v in self.vector):
            raise ValueError("embedding contains non-finite values")


@dataclass(frozen=True)
class TranslationResult:
    """Per-clip cascade output with intermediates and timings.

    stage_timings holds one entry per executed stage (server-reported
    processing time when a remote backend provides it, else client wall
    time); wall_timings always holds client wall time.  total_latency_s
    covers the whole cascade call including orchestration overhead.
    """

    utterance_id: str
    transcript: str
    translation: str
    tts_audio: AudioClip
    output_audio: AudioClip
    stage_timings: dict[str, float]
    total_latency_s: float
    wall_timings: dict[str, float] = field(default_factory=dict)


# --- WAV I/O ----------------------------------------------------------------

def _parse_wav(stream) -> AudioClip:
    header = stream.read(12)
    if len(header) < 12 or header[:4] != b"RIFF" or header[8:12] != b"WAVE":
        raise NotWavError("not a RIFF/WAVE file")

    fmt = None
    data = None
    speaker_tag = None
    while True:
        chunk_header = stream.read(8)
        if len(chunk_header) < 8:
            break
        chunk_id, size = struct.unpack("<4sI", chunk_header)
        body = stream.read(size)
        if len(body) < size:
            raise NotWavError(f"truncated {chunk_id.decode('ascii', 'replace')} chunk")
        if size % 2:
            stream.read(1)

        if chunk_id == b"fmt ":
            if size < 16:
                raise NotWavError("fmt chunk too short")
            fmt = struct.unpack("<HHIIHH", body[:16])
        elif chunk_id == b"data":
            data = body
        elif chunk_id == b"LIST" and body[:4] == b"INFO":
            speaker_tag = _parse_info_iart(body[4:])

    if fmt is None or data is None:
        raise NotWavError("missing fmt or data chunk")
    audio_format, channels, sample_rate, _, _, bits = fmt
    if audio_format != 1:
        raise UnsupportedWavError(f"unsupported audio format {audio_format} (PCM only)")
    if channels != 1:
        raise UnsupportedWavError(f"unsupported channel count {channels} (mono only)")
    if bits != 16:
        raise UnsupportedWavError(f"unsupported bit depth {bits} (16-bit only)")

    samples = np.frombuffer(data, dtype="<i2")
    return AudioClip(samples, sample_rate, speaker_tag)


def _parse_info_iart(body: bytes) -> str | None:
    pos = 0
    while pos + 8 <= len(body):
        sub_id, size = struct.unpack_from("<4sI", body, pos)
        value = body[pos + 8 : pos + 8 + size]
        if sub_id == b"IART":
            return value.rstrip(b"\x00").decode("utf-8")
        pos += 8 + size + (size % 2)
    return None


def _encode_wav(clip: AudioClip) -> bytes:
    if len(clip.samples) == 0:
        raise ValueError("cannot write a clip with no samples")
    data = np.asarray(clip.samples, dtype="<i2").tobytes()

    chunks = b""
    if clip.speaker_tag is not None:
        tag = clip.speaker_tag.encode("utf-8") + b"\x00"
        if len(tag) % 2:
            tag += b"\x00"
        chunks = struct.pack("<4sI4s4sI", b"LIST", 4 + 8 + len(tag), b"INFO", b"IART", len(tag)) + tag

    fmt = struct.pack("<4sIHHIIHH", b"fmt ", 16, 1, 1, clip.sample_rate, clip.sample_rate * 2, 2, 16)
    data_chunk = struct.pack("<4sI", b"data", len(data)) + data
    if len(data) % 2:
        data_chunk += b"\x00"
    body = b"WAVE" + fmt + data_chunk + chunks
    return struct.pack("<4sI", b"RIFF", len(body)) + body


def read_wav(path) -> AudioClip:
    """Read a mono PCM-16 WAV file; speaker tag from the IART chunk if present."""
    with open(path, "rb") as fh:
        return _parse_wav(fh)


def write_wav(clip: AudioClip, path) -> None:
    """Write a clip losslessly; read_wav(path) reproduces it exactly."""
    Path(path).write_bytes(_encode_wav(clip))


def clip_from_wav_bytes(data: bytes) -> AudioClip:
    return _parse_wav(BytesIO(data))


def clip_to_wav_bytes(clip: AudioClip) -> bytes:
    return _encode_wav(clip)
