import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from cascada.core import DecodeParams, LanguageCode
from cascada.mocks import mock_backends, tone_asr, tone_tts
from cascada.pipeline import BackendSelection, PipelineConfig, run_cascade
from cascada.remote import (
    RemoteBackendSet,
    RemoteEndpoint,
    RemoteProtocolError,
    RemoteTransportError,
    check_capabilities,
    health_check,
)
from cascada.server import MockProtocolServer

ES, EN = LanguageCode("es"), LanguageCode("en")
DECODE = DecodeParams()


@pytest.fixture
def server():
    srv = MockProtocolServer(mock_backends(lexicon={"hola": "hello"})).start()
    yield srv
    srv.stop()


def endpoint(srv, retries=2, backoff_s=0.01, timeout_s=10.0):
    return RemoteEndpoint(srv.base_url, timeout_s=timeout_s, retries=retries, backoff_s=backoff_s)


def backend_set(srv, **kwargs):
    ep = endpoint(srv, **kwargs)
    return RemoteBackendSet({s: ep for s in ("asr", "mt", "tts", "vc", "embed")})


class TestHealth:
    def test_capabilities(self, server):
        report = health_check(endpoint(server))
        assert report["status"] == "ok"
        assert report["capabilities"] == ["asr", "mt", "tts", "vc", "embed"]
        assert set(report["models"]) == {"asr", "mt", "tts", "vc", "embed"}

    def test_missing_capability_detected(self, server):
        with pytest.raises(RemoteProtocolError, match="lacks required"):
            check_capabilities(endpoint(server), ["asr", "nonexistent"])

    def test_unreachable(self):
        ep = RemoteEndpoint("http://127.0.0.1:1", timeout_s=0.5, retries=0, backoff_s=0.01)
        with pytest.raises(RemoteTransportError):
            health_check(ep)


class TestRemoteStages:
    def test_asr_roundtrip(self, server):
        remote = backend_set(server)
        assert remote.asr(tone_tts("hola", ES), ES, DECODE) == "hola"

    def test_mt(self, server):
        assert backend_set(server).mt("hola", ES, EN) == "hello"

    def test_tts_audio_roundtrip(self, server):
        clip = backend_set(server).tts("hello", EN)
        assert tone_asr(clip, EN, DECODE) == "hello"
        assert clip.speaker_tag == "tts-default"

    def test_vc_tag_transfer(self, server):
        remote = backend_set(server)
        content = tone_tts("abc", EN)
        reference = tone_tts("x", ES).with_tag("spk3")
        assert remote.vc(content, reference).speaker_tag == "spk3"

    def test_embed_matches_local(self, server):
        from cascada.mocks import hash_embed
        clip = tone_tts("abc", EN).with_tag("spk1")
        assert backend_set(server).embed(clip) == hash_embed(clip)

    def test_server_processing_time_recorded(self, server):
        remote = backend_set(server)
        remote.asr(tone_tts("hola", ES), ES, DECODE)
        server_s = remote.pop_server_s("asr")
        assert server_s is not None and server_s >= 0.0
        assert remote.pop_server_s("asr") is None  # consumed


class TestRetries:
    def test_recovers_after_transient_500(self):
        # fault seed 5 draws 0.623 then 0.742: first request 500s, the retry passes
        srv = MockProtocolServer(mock_backends(), fail_rate=0.7, fault_seed=5).start()
        try:
            remote = RemoteBackendSet({"mt": endpoint(srv, retries=5)})
            assert remote.mt("hola", ES, EN) == "hola"
            assert srv.request_count == 2
        finally:
            srv.stop()

    def test_exhausts_retries_on_full_failure(self):
        srv = MockProtocolServer(mock_backends(), fail_rate=1.0).start()
        try:
            remote = RemoteBackendSet({"mt": endpoint(srv, retries=2)})
            with pytest.raises(RemoteTransportError) as excinfo:
                remote.mt("hola", ES, EN)
            assert excinfo.value.attempts == 3
            assert srv.request_count == 3
        finally:
            srv.stop()

    def test_4xx_never_retried(self, server):
        before = server.request_count
        remote = backend_set(server, retries=3)
        with pytest.raises(RemoteProtocolError) as excinfo:
            remote.tts("", EN)  # empty text -> invalid_input, 400
        assert excinfo.value.status == 400
        assert excinfo.value.code == "invalid_input"
        assert server.request_count == before + 1

    def test_timeout_distinct_error(self):
        class SlowHandler(BaseHTTPRequestHandler):
            def do_GET(self):
                threading.Event().wait(1.0)

            def log_message(self, *args):
                pass

        httpd = ThreadingHTTPServer(("127.0.0.1", 0), SlowHandler)
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        try:
            ep = RemoteEndpoint(f"http://127.0.0.1:{httpd.server_address[1]}",
                                timeout_s=0.2, retries=0, backoff_s=0.01)
            from cascada.remote import RemoteTimeoutError
            with pytest.raises(RemoteTimeoutError):
                health_check(ep)
        finally:
            httpd.shutdown()
            httpd.server_close()


class TestSubstitutability:
    def test_remote_pipeline_matches_local_mocks(self, server):
        cfg_remote = PipelineConfig(ES, EN, backend=BackendSelection(
            mode="remote", urls={s: server.base_url for s in ("asr", "mt", "tts", "vc", "embed")},
            backoff_s=0.01))
        source = tone_tts("hola", ES).with_tag("spk7")
        local = run_cascade(source, PipelineConfig(ES, EN), mock_backends(lexicon={"hola": "hello"}))
        remote = run_cascade(source, cfg_remote, backend_set(server))
        assert remote.transcript == local.transcript
        assert remote.translation == local.translation
        assert remote.output_audio == local.output_audio
        assert set(remote.stage_timings) == {"asr", "mt", "tts", "vc"}
