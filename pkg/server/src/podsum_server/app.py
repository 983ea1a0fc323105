"""HTTP model server: POST /v1/summarize and POST /v1/embed.

Fixture mode answers deterministically and needs no model downloads:
summarize returns the first min_length whitespace tokens of the source
(the response also echoes the received config for conformance tests;
clients ignore extra keys), embed returns hash-based vectors that
bit-match the pipeline's offline stub. Pretrained mode is the slot for
real checkpoints and answers 503 until they are wired in.

Malformed requests get HTTP 400 with {"error": reason}. Every response
carries the protocol version header.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from podsum_server.hashing import hash_embed

PROTO_HEADER = {"X-Podsum-Proto": "1"}
MODES = ("fixture", "pretrained")

# (field, accepted types); bool is an int subclass and never acceptable
_CONFIG_FIELDS = (
    ("length_penalty", (int, float)),
    ("no_repeat_ngram_size", int),
    ("min_length", int),
    ("max_length", int),
    ("num_beams", int),
)


@dataclass(frozen=True)
class ServerConfig:
    mode: str = "fixture"
    summarizer_model: str = ""
    encoder_model: str = ""
    host: str = "127.0.0.1"
    port: int = 8080
    max_request_bytes: int = 1_000_000

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError("mode must be one of %s, got %r" % (list(MODES), self.mode))
        if not 1 <= self.port <= 65535:
            raise ValueError("port must be in [1, 65535], got %d" % self.port)
        if self.max_request_bytes < 1:
            raise ValueError("max_request_bytes must be >= 1")


class ProtocolError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _check_config(wire: dict) -> dict:
    expected = tuple(name for name, _ in _CONFIG_FIELDS)
    if set(wire) != set(expected):
        raise ProtocolError(
            "config must have exactly the fields %s" % ", ".join(expected)
        )
    for name, types in _CONFIG_FIELDS:
        value = wire[name]
        if isinstance(value, bool) or not isinstance(value, types):
            raise ProtocolError("config field %r has the wrong type" % name)
    if wire["min_length"] < 0:
        raise ProtocolError("min_length must be >= 0")
    if wire["min_length"] > wire["max_length"]:
        raise ProtocolError("min_length exceeds max_length")
    if wire["num_beams"] < 1:
        raise ProtocolError("num_beams must be >= 1")
    if wire["no_repeat_ngram_size"] < 0:
        raise ProtocolError("no_repeat_ngram_size must be >= 0")
    return wire


def create_app(config: ServerConfig = ServerConfig()) -> FastAPI:
    app = FastAPI(title="podsum model server", docs_url=None, redoc_url=None)

    @app.exception_handler(ProtocolError)
    async def _bad_request(_request, exc):
        return JSONResponse({"error": exc.message}, status_code=400, headers=PROTO_HEADER)

    async def _payload(request: Request) -> dict:
        body = await request.body()
        if len(body) > config.max_request_bytes:
            raise ProtocolError(
                "request body exceeds %d bytes" % config.max_request_bytes
            )
        try:
            payload = json.loads(body)
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise ProtocolError("request body is not valid JSON")
        if not isinstance(payload, dict):
            raise ProtocolError("request body must be a JSON object")
        return payload

    def _unavailable(what: str) -> JSONResponse:
        return JSONResponse(
            {"error": "no pretrained %s is loaded" % what},
            status_code=503,
            headers=PROTO_HEADER,
        )

    @app.post("/v1/summarize")
    async def summarize(request: Request):
        if config.mode != "fixture":
            return _unavailable("summarizer model")
        payload = await _payload(request)
        source = payload.get("source")
        if not isinstance(source, str):
            raise ProtocolError("'source' must be a string")
        wire = payload.get("config")
        if not isinstance(wire, dict):
            raise ProtocolError("'config' must be an object")
        _check_config(wire)
        summary = " ".join(source.split()[: wire["min_length"]])
        return JSONResponse(
            {"summary": summary, "config": wire}, headers=PROTO_HEADER
        )

    @app.post("/v1/embed")
    async def embed(request: Request):
        if config.mode != "fixture":
            return _unavailable("encoder model")
        payload = await _payload(request)
        texts = payload.get("texts")
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise ProtocolError("'texts' must be a list of strings")
        dim = payload.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise ProtocolError("'dim' must be a positive integer")
        vectors = [hash_embed(text, dim).tolist() for text in texts]
        return JSONResponse({"vectors": vectors}, headers=PROTO_HEADER)

    return app
