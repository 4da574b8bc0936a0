import json

import pytest

from cascada.core import write_wav
from cascada.mocks import tone_tts


def write_tone_manifest(directory, texts, source_lang="es", target_lang="en",
                        references=None, source_texts=None, tags=None):
    """Write tone-encoded WAVs plus a JSONL manifest; returns the manifest path."""
    rows = []
    for i, text in enumerate(texts):
        clip = tone_tts(text, source_lang)
        if tags is not None:
            clip = clip.with_tag(tags[i])
        wav_name = f"clip{i:03d}.wav"
        write_wav(clip, directory / wav_name)
        row = {
            "id": f"utt{i:03d}",
            "audio_path": wav_name,
            "source_lang": source_lang,
            "target_lang": target_lang,
        }
        if source_texts is not None:
            row["source_text"] = source_texts[i]
        else:
            row["source_text"] = text
        if references is not None:
            row["reference_translation"] = references[i]
        rows.append(row)
    manifest_path = directory / "manifest.jsonl"
    manifest_path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return manifest_path


@pytest.fixture
def tone_manifest_dir(tmp_path):
    return tmp_path
