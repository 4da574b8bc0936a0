"""HTTP client for the stage wire protocol.

Retries apply only to transport failures and 5xx responses, with doubling
backoff; 4xx responses surface immediately as protocol errors.  Server
reported processing_ms is kept alongside the client's wall clock so both
pipeline latency and model latency are reportable.
"""

import threading
import time
from dataclasses import dataclass

import requests

from . import wire
from .core import AudioClip, DecodeParams, SpeakerEmbedding


class RemoteError(RuntimeError):
    """Base class for remote backend failures."""


class RemoteTransportError(RemoteError):
    """Connection failed or retries were exhausted."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class RemoteTimeoutError(RemoteTransportError):
    pass


class RemoteProtocolError(RemoteError):
    """Server replied with an error payload or an unparseable body."""

    def __init__(self, message: str, code: str | None = None, status: int | None = None):
        super().__init__(message)
        self.code = code
        self.status = status


@dataclass(frozen=True)
class RemoteEndpoint:
    base_url: str
    timeout_s: float = 60.0
    retries: int = 2
    backoff_s: float = 0.5

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")


def _error_from_response(resp) -> RemoteProtocolError:
    code, message = None, resp.text[:200]
    try:
        payload = resp.json()
        code = payload["error"]["code"]
        message = payload["error"]["message"]
    except Exception:
        pass
    return RemoteProtocolError(f"server error {resp.status_code}: {message}", code=code,
                               status=resp.status_code)


class _Transport:
    """One endpoint's request loop; sessions are per-thread."""

    def __init__(self, endpoint: RemoteEndpoint):
        self.endpoint = endpoint
        self._local = threading.local()

    def _session(self) -> requests.Session:
        if not hasattr(self._local, "session"):
            self._local.session = requests.Session()
        return self._local.session

    def request(self, method: str, path: str, payload: dict | None = None) -> dict:
        url = self.endpoint.base_url.rstrip("/") + path
        attempts = 0
        backoff = self.endpoint.backoff_s
        last: Exception | None = None
        while attempts <= self.endpoint.retries:
            attempts += 1
            try:
                if method == "GET":
                    resp = self._session().get(url, timeout=self.endpoint.timeout_s)
                else:
                    resp = self._session().post(
                        url,
                        data=wire.canonical_json(payload),
                        headers={"Content-Type": "application/json"},
                        timeout=self.endpoint.timeout_s,
                    )
            except requests.Timeout as exc:
                last = RemoteTimeoutError(f"timeout contacting {url}: {exc}", attempts)
            except requests.RequestException as exc:
                last = RemoteTransportError(f"transport failure contacting {url}: {exc}", attempts)
            else:
                if 200 <= resp.status_code < 300:
                    try:
                        return resp.json()
                    except ValueError as exc:
                        raise RemoteProtocolError(f"malformed response from {url}: {exc}")
                error = _error_from_response(resp)
                if resp.status_code < 500:
                    raise error
                last = error
            if attempts <= self.endpoint.retries:
                time.sleep(backoff)
                backoff *= 2
        if isinstance(last, RemoteTransportError):
            last.attempts = attempts
            raise last
        raise RemoteTransportError(f"retries exhausted for {url}: {last}", attempts)


class RemoteBackendSet:
    """StageBackends-compatible client over per-stage remote endpoints."""

    deterministic = False

    def __init__(self, endpoints: dict[str, RemoteEndpoint]):
        self._transports = {stage: _Transport(ep) for stage, ep in endpoints.items()}
        self._server_s = threading.local()

    def _transport(self, stage: str) -> _Transport:
        if stage not in self._transports:
            raise RemoteError(f"no endpoint configured for stage {stage!r}")
        return self._transports[stage]

    def _note_server_ms(self, stage: str, payload: dict):
        ms = payload.get("processing_ms")
        if ms is not None:
            if not hasattr(self._server_s, "values"):
                self._server_s.values = {}
            self._server_s.values[stage] = float(ms) / 1000.0

    def pop_server_s(self, stage: str) -> float | None:
        values = getattr(self._server_s, "values", None)
        if values is None:
            return None
        return values.pop(stage, None)

    def asr(self, clip: AudioClip, lang, decode: DecodeParams) -> str:
        payload = self._transport("asr").request("POST", wire.ASR_PATH,
                                                 wire.asr_request(clip, lang, decode))
        self._note_server_ms("asr", payload)
        return payload["text"]

    def mt(self, text: str, src, tgt) -> str:
        payload = self._transport("mt").request("POST", wire.TRANSLATE_PATH,
                                                wire.translate_request(text, src, tgt))
        self._note_server_ms("mt", payload)
        return payload["text"]

    def tts(self, text: str, lang) -> AudioClip:
        payload = self._transport("tts").request("POST", wire.TTS_PATH,
                                                 wire.tts_request(text, lang))
        self._note_server_ms("tts", payload)
        return wire.decode_audio(payload["audio"])

    def vc(self, content: AudioClip, reference: AudioClip) -> AudioClip:
        payload = self._transport("vc").request("POST", wire.CONVERT_PATH,
                                                wire.convert_request(content, reference))
        self._note_server_ms("vc", payload)
        return wire.decode_audio(payload["audio"])

    def embed(self, clip: AudioClip) -> SpeakerEmbedding:
        payload = self._transport("embed").request("POST", wire.EMBED_PATH,
                                                   wire.embed_request(clip))
        self._note_server_ms("embed", payload)
        vector = tuple(float(v) for v in payload["embedding"])
        return SpeakerEmbedding(vector, len(vector))


def health_check(endpoint: RemoteEndpoint) -> dict:
    """GET /v1/health; returns the server's capability report."""
    return _Transport(endpoint).request("GET", wire.HEALTH_PATH)


def check_capabilities(endpoint: RemoteEndpoint, required: list[str]) -> dict:
    """Health-check and fail fast if a required capability is missing."""
    report = health_check(endpoint)
    missing = [cap for cap in required if cap not in report.get("capabilities", [])]
    if missing:
        raise RemoteProtocolError(f"server lacks required capabilities: {missing}",
                                  code="missing_capability")
    return report
