"""FastAPI application speaking the stage wire protocol.

Bodies are read raw and responses rendered with canonical_json so the
bytes on the wire match the golden fixtures exactly, independent of any
framework serialization defaults.
"""

import json

from fastapi import FastAPI, Request, Response

from . import mock, real
from .config import AdapterConfig
from .mock import STAGES, BadRequest

HEALTH_PATH = "/v1/health"
POST_PATHS = ("/v1/asr", "/v1/translate", "/v1/tts", "/v1/convert", "/v1/embed")


def canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _reply(status: int, payload: dict) -> Response:
    return Response(content=canonical_json(payload), status_code=status,
                    media_type="application/json")


def _error(status: int, code: str, message: str) -> Response:
    return _reply(status, {"error": {"code": code, "message": message}})


def create_app(config: AdapterConfig | None = None) -> FastAPI:
    config = config or AdapterConfig()
    app = FastAPI(title="model-adapter", docs_url=None, redoc_url=None, openapi_url=None)

    if config.mode == "mock":
        handlers = {
            "/v1/asr": mock.asr,
            "/v1/translate": mock.translate,
            "/v1/tts": mock.tts,
            "/v1/convert": mock.convert,
            "/v1/embed": mock.embed,
        }
    else:
        stages = real.RealStages(config)
        handlers = {
            "/v1/asr": stages.asr,
            "/v1/translate": stages.translate,
            "/v1/tts": stages.tts,
            "/v1/convert": stages.convert,
            "/v1/embed": stages.embed,
        }

    @app.get(HEALTH_PATH)
    def health() -> Response:
        return _reply(200, {
            "status": "ok",
            "mode": config.mode,
            "capabilities": ["asr", "mt", "tts", "vc", "embed"],
            "models": {stage: config.model_for(stage) for stage in STAGES},
        })

    def make_endpoint(path: str):
        handler = handlers[path]

        async def endpoint(request: Request) -> Response:
            raw = await request.body()
            try:
                payload = json.loads(raw)
            except ValueError:
                return _error(400, "bad_request", "body is not valid JSON")
            if not isinstance(payload, dict):
                return _error(400, "bad_request", "body must be a JSON object")
            try:
                return _reply(200, handler(payload))
            except KeyError as exc:
                return _error(400, "bad_request", f"missing field {exc}")
            except BadRequest as exc:
                return _error(400, "invalid_input", str(exc))
            except real.NotImplementedStage as exc:
                return _error(501, "not_implemented", str(exc))
            except Exception as exc:
                return _error(500, "backend_error", str(exc))

        return endpoint

    for path in POST_PATHS:
        app.post(path)(make_endpoint(path))

    return app
