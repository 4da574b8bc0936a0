"""Golden-fixture conformance: the mock server must reproduce every
request/response pair in fixtures/wire/ byte-for-byte."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from model_adapter.app import canonical_json, create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent.parent / "fixtures" / "wire"
FIXTURES = sorted(FIXTURE_DIR.glob("*.json"))


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def load(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def test_fixture_corpus_present():
    assert len(FIXTURES) >= 13


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_fixture_byte_exact(client, path):
    fixture = load(path)
    if fixture["method"] == "GET":
        response = client.get(fixture["path"])
    elif fixture.get("request_raw") is not None:
        response = client.post(fixture["path"], content=fixture["request_raw"],
                               headers={"Content-Type": "application/json"})
    else:
        response = client.post(fixture["path"], content=canonical_json(fixture["request"]),
                               headers={"Content-Type": "application/json"})
    assert response.status_code == fixture["status"], response.content
    assert response.content == canonical_json(fixture["response"])


def test_missing_field_names_the_field(client):
    response = client.post("/v1/translate", json={"text": "hola", "source_lang": "es"})
    assert response.status_code == 400
    assert json.loads(response.content)["error"]["message"] == "missing field 'target_lang'"


def test_non_object_body(client):
    response = client.post("/v1/translate", content=b"[1,2,3]",
                           headers={"Content-Type": "application/json"})
    assert response.status_code == 400
    assert json.loads(response.content)["error"]["code"] == "bad_request"


def test_corrupt_audio_is_invalid_input(client):
    response = client.post("/v1/asr", json={"audio": "bm90IGEgd2F2", "language": "es"})
    assert response.status_code == 400
    assert json.loads(response.content)["error"]["code"] == "invalid_input"


def test_health_reports_mock_models(client):
    payload = json.loads(client.get("/v1/health").content)
    assert payload["status"] == "ok"
    assert payload["mode"] == "mock"
    assert set(payload["models"]) == {"asr", "mt", "tts", "vc", "embed"}


def test_real_mode_unwired_stage_gives_501():
    from model_adapter.config import AdapterConfig

    client = TestClient(create_app(AdapterConfig(mode="real")))
    response = client.post("/v1/tts", json={"text": "hi", "language": "en"})
    assert response.status_code == 501
    assert json.loads(response.content)["error"]["code"] == "not_implemented"
