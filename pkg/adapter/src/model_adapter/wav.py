"""Minimal mono PCM-16 WAV codec with the LIST/INFO IART speaker tag.

Byte layout matches the pipeline's published WAV interface exactly:
RIFF, canonical fmt chunk, data chunk (even-padded), then an optional
LIST/INFO chunk whose IART value is the NUL-terminated UTF-8 speaker tag.
"""

import struct
from dataclasses import dataclass


class WavError(ValueError):
    pass


@dataclass(frozen=True)
class Clip:
    samples: bytes          # raw little-endian int16 payload
    sample_rate: int
    speaker_tag: str | None = None

    @property
    def n_samples(self) -> int:
        return len(self.samples) // 2


def decode(data: bytes) -> Clip:
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavError("not a RIFF/WAVE file")
    pos = 12
    fmt = None
    payload = None
    tag = None
    while pos + 8 <= len(data):
        chunk_id, size = struct.unpack_from("<4sI", data, pos)
        body = data[pos + 8 : pos + 8 + size]
        pos += 8 + size + (size % 2)
        if chunk_id == b"fmt ":
            fmt = struct.unpack("<HHIIHH", body[:16])
        elif chunk_id == b"data":
            payload = body
        elif chunk_id == b"LIST" and body[:4] == b"INFO":
            tag = _parse_iart(body[4:])
    if fmt is None or payload is None:
        raise WavError("missing fmt or data chunk")
    audio_format, channels, rate, _, _, bits = fmt
    if (audio_format, channels, bits) != (1, 1, 16):
        raise WavError("only mono 16-bit PCM is supported")
    return Clip(payload, rate, tag)


def _parse_iart(body: bytes) -> str | None:
    pos = 0
    while pos + 8 <= len(body):
        sub_id, size = struct.unpack_from("<4sI", body, pos)
        if sub_id == b"IART":
            return body[pos + 8 : pos + 8 + size].rstrip(b"\x00").decode("utf-8")
        pos += 8 + size + (size % 2)
    return None


def encode(clip: Clip) -> bytes:
    if not clip.samples:
        raise WavError("cannot encode a clip with no samples")
    chunks = b""
    if clip.speaker_tag is not None:
        tag = clip.speaker_tag.encode("utf-8") + b"\x00"
        if len(tag) % 2:
            tag += b"\x00"
        chunks = struct.pack("<4sI4s4sI", b"LIST", 4 + 8 + len(tag), b"INFO", b"IART",
                             len(tag)) + tag
    fmt = struct.pack("<4sIHHIIHH", b"fmt ", 16, 1, 1, clip.sample_rate,
                      clip.sample_rate * 2, 2, 16)
    data_chunk = struct.pack("<4sI", b"data", len(clip.samples)) + clip.samples
    if len(clip.samples) % 2:
        data_chunk += b"\x00"
    body = b"WAVE" + fmt + data_chunk + chunks
    return struct.pack("<4sI", b"RIFF", len(body)) + body
