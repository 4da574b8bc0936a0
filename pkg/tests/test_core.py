import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascada.core import (
    AudioClip,
    DecodeParams,
    LanguageCode,
    NotWavError,
    SpeakerEmbedding,
    UnsupportedWavError,
    clip_from_wav_bytes,
    clip_to_wav_bytes,
    read_wav,
    write_wav,
)


def make_clip(samples, rate=16000, tag=None):
    return AudioClip(np.array(samples, dtype=np.int16), rate, tag)


class TestLanguageCode:
    def test_valid(self):
        assert LanguageCode("es") == "es"
        assert LanguageCode("en") == LanguageCode("en")

    @pytest.mark.parametrize("bad", ["ES", "eng", "e", "", "e1", "é!"])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            LanguageCode(bad)


class TestAudioClip:
    def test_duration(self):
        clip = make_clip(range(100), rate=8000)
        assert clip.duration_s == 100 / 8000
        assert clip.duration_s * clip.sample_rate == len(clip.samples)

    def test_one_second(self):
        clip = make_clip([0] * 16000, rate=16000)
        assert clip.duration_s == 1.0

    def test_invalid_rate(self):
        with pytest.raises(ValueError):
            make_clip([1, 2], rate=0)

    def test_immutable_samples(self):
        clip = make_clip([1, 2, 3])
        with pytest.raises(ValueError):
            clip.samples[0] = 9

    def test_equality(self):
        assert make_clip([1, 2], tag="a") == make_clip([1, 2], tag="a")
        assert make_clip([1, 2], tag="a") != make_clip([1, 2], tag="b")
        assert make_clip([1, 2]) != make_clip([1, 3])


class TestDecodeParams:
    def test_greedy_ignores_beam(self):
        params = DecodeParams(1.0, "greedy", beam_size=5)
        assert params.beam_size is None

    def test_beam_requires_size(self):
        with pytest.raises(ValueError):
            DecodeParams(1.0, "beam")
        assert DecodeParams(0.0, "beam", beam_size=4).beam_size == 4

    def test_negative_temperature(self):
        with pytest.raises(ValueError):
            DecodeParams(-0.1)


class TestSpeakerEmbedding:
    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            SpeakerEmbedding((1.0, 0.0), 3)

    def test_non_finite(self):
        with pytest.raises(ValueError):
            SpeakerEmbedding((float("nan"), 0.0), 2)


class TestWavRoundtrip:
    def test_basic(self, tmp_path):
        clip = make_clip([0, 1, -1, 32767, -32768], rate=22050, tag="spk1")
        path = tmp_path / "clip.wav"
        write_wav(clip, path)
        assert read_wav(path) == clip

    def test_no_tag(self, tmp_path):
        clip = make_clip([5, 6, 7])
        path = tmp_path / "clip.wav"
        write_wav(clip, path)
        back = read_wav(path)
        assert back.speaker_tag is None
        assert back == clip

    def test_canonical_size(self):
        clip = make_clip(range(100), rate=8000)
        data = clip_to_wav_bytes(clip)
        assert len(data) == 44 + 200

    def test_one_second_file(self, tmp_path):
        path = tmp_path / "one.wav"
        write_wav(make_clip([0] * 16000), path)
        assert read_wav(path).duration_s == 1.0

    def test_empty_clip_rejected(self):
        with pytest.raises(ValueError):
            clip_to_wav_bytes(make_clip([]))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_wav(tmp_path / "nope.wav")

    @settings(max_examples=50, deadline=None)
    @given(
        samples=st.lists(st.integers(-32768, 32767), min_size=1, max_size=64),
        rate=st.integers(1, 96000),
        tag=st.one_of(st.none(), st.text(min_size=1, max_size=12)),
    )
    def test_roundtrip_property(self, samples, rate, tag):
        clip = make_clip(samples, rate=rate, tag=tag)
        assert clip_from_wav_bytes(clip_to_wav_bytes(clip)) == clip


class TestWavErrors:
    def test_not_riff(self, tmp_path):
        path = tmp_path / "bad.wav"
        path.write_bytes(b"not a wav file at all....")
        with pytest.raises(NotWavError):
            read_wav(path)

    def _wav_with_fmt(self, audio_format=1, channels=1, bits=16):
        fmt = struct.pack("<4sIHHIIHH", b"fmt ", 16, audio_format, channels,
                          16000, 16000 * channels * bits // 8, channels * bits // 8, bits)
        data = struct.pack("<4sI", b"data", 4) + b"\x00\x00\x00\x00"
        body = b"WAVE" + fmt + data
        return struct.pack("<4sI", b"RIFF", len(body)) + body

    def test_stereo_rejected(self):
        with pytest.raises(UnsupportedWavError, match="channel"):
            clip_from_wav_bytes(self._wav_with_fmt(channels=2))

    def test_non_pcm_rejected(self):
        with pytest.raises(UnsupportedWavError, match="format"):
            clip_from_wav_bytes(self._wav_with_fmt(audio_format=3))

    def test_8bit_rejected(self):
        with pytest.raises(UnsupportedWavError, match="bit depth"):
            clip_from_wav_bytes(self._wav_with_fmt(bits=8))

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError):
            write_wav(make_clip([1]), tmp_path / "missing_dir" / "x.wav")
