"""In-process mock model server speaking the full stage wire protocol.

Backed by the deterministic mock backends, so one artifact exercises both
sides of the protocol.  Fault injection (--fail-rate, --delay-ms) supports
retry and latency tests.
"""

import json
import random
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import wire
from .core import DecodeParams
from .pipeline import StageBackends


class MockProtocolServer:
    """ThreadingHTTPServer wrapper; start()/stop() for embedding in tests."""

    def __init__(self, backends: StageBackends, port: int = 0, host: str = "127.0.0.1",
                 fail_rate: float = 0.0, delay_ms: float = 0.0, fault_seed: int = 0):
        self.backends = backends
        self.fail_rate = fail_rate
        self.delay_s = delay_ms / 1000.0
        self.request_count = 0
        self._fault_rng = random.Random(fault_seed)
        self._lock = threading.Lock()
        handler = _make_handler(self)
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    @property
    def base_url(self) -> str:
        return f"http://{self.httpd.server_address[0]}:{self.port}"

    def start(self):
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def serve_forever(self):
        self.httpd.serve_forever()

    def note_request(self) -> bool:
        """Count the request; True means this request should be failed."""
        with self._lock:
            self.request_count += 1
            return self._fault_rng.random() < self.fail_rate


def _decode_from_payload(raw: dict | None) -> DecodeParams:
    raw = raw or {}
    return DecodeParams(
        temperature=raw.get("temperature", 1.0),
        strategy=raw.get("strategy", "greedy"),
        beam_size=raw.get("beam_size"),
    )


def _make_handler(server: MockProtocolServer):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):
            pass

        def _send(self, status: int, payload: dict):
            body = wire.canonical_json(payload)
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _fault_gate(self) -> bool:
            if server.delay_s:
                time.sleep(server.delay_s)
            if server.note_request():
                self._send(500, wire.error_payload("injected_fault", "fault injection"))
                return True
            return False

        def do_GET(self):
            if self._fault_gate():
                return
            if self.path != wire.HEALTH_PATH:
                self._send(404, wire.error_payload("not_found", f"unknown path {self.path}"))
                return
            self._send(200, {
                "status": "ok",
                "capabilities": list(wire.ALL_CAPABILITIES),
                "models": {stage: "cascada-mock" for stage in wire.ALL_CAPABILITIES},
            })

        def do_POST(self):
            # read the body before any early reply, or keep-alive desyncs
            length = int(self.headers.get("Content-Length", 0))
            raw = self.rfile.read(length)
            if self._fault_gate():
                return
            try:
                payload = json.loads(raw)
            except ValueError:
                self._send(400, wire.error_payload("bad_request", "body is not valid JSON"))
                return
            try:
                handler = {
                    wire.ASR_PATH: self._asr,
                    wire.TRANSLATE_PATH: self._translate,
                    wire.TTS_PATH: self._tts,
                    wire.CONVERT_PATH: self._convert,
                    wire.EMBED_PATH: self._embed,
                }.get(self.path)
                if handler is None:
                    self._send(404, wire.error_payload("not_found", f"unknown path {self.path}"))
                    return
                t0 = time.perf_counter()
                response = handler(payload)
                response.setdefault("processing_ms", (time.perf_counter() - t0) * 1000.0)
                self._send(200, response)
            except KeyError as exc:
                self._send(400, wire.error_payload("bad_request", f"missing field {exc}"))
            except ValueError as exc:
                self._send(400, wire.error_payload("invalid_input", str(exc)))
            except Exception as exc:  # backend failure
                self._send(500, wire.error_payload("backend_error", str(exc)))

        def _asr(self, payload):
            clip = wire.decode_audio(payload["audio"])
            decode = _decode_from_payload(payload.get("decode"))
            text = server.backends.asr(clip, payload["language"], decode)
            return {"text": text}

        def _translate(self, payload):
            text = server.backends.mt(payload["text"], payload["source_lang"], payload["target_lang"])
            return {"text": text}

        def _tts(self, payload):
            clip = server.backends.tts(payload["text"], payload["language"])
            return {"audio": wire.encode_audio(clip)}

        def _convert(self, payload):
            out = server.backends.vc(
                wire.decode_audio(payload["content_audio"]),
                wire.decode_audio(payload["reference_audio"]),
            )
            return {"audio": wire.encode_audio(out)}

        def _embed(self, payload):
            embedding = server.backends.embed(wire.decode_audio(payload["audio"]))
            return {"embedding": list(embedding.vector)}

    return Handler
