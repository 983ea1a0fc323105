"""Wire-protocol behavior via the in-process test client."""

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from podsum_server.app import ServerConfig, create_app
from podsum_server.hashing import fnv1a64, hash_embed, splitmix64_stream

GOOD_CONFIG = {
    "length_penalty": 2.0,
    "no_repeat_ngram_size": 3,
    "min_length": 5,
    "max_length": 250,
    "num_beams": 4,
}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(ServerConfig()))


def post_summarize(client, source, config=None):
    return client.post(
        "/v1/summarize", json={"source": source, "config": config or GOOD_CONFIG}
    )


def test_server_config_validation():
    with pytest.raises(ValueError, match="mode"):
        ServerConfig(mode="turbo")
    with pytest.raises(ValueError, match="port"):
        ServerConfig(port=0)
    with pytest.raises(ValueError, match="max_request_bytes"):
        ServerConfig(max_request_bytes=0)


def test_summarize_returns_min_length_prefix(client):
    source = " ".join("tok%d" % i for i in range(20))
    resp = post_summarize(client, source)
    assert resp.status_code == 200
    assert resp.headers["X-Podsum-Proto"] == "1"
    body = resp.json()
    assert body["summary"] == " ".join("tok%d" % i for i in range(5))
    assert body["config"] == GOOD_CONFIG


def test_summarize_short_source_returned_whole(client):
    resp = post_summarize(client, "only three tokens")
    assert resp.json()["summary"] == "only three tokens"


def test_summarize_respects_max_length(client):
    config = dict(GOOD_CONFIG, min_length=8, max_length=8)
    source = " ".join("w%d" % i for i in range(50))
    body = post_summarize(client, source, config).json()
    assert len(body["summary"].split()) <= config["max_length"]


def test_summarize_min_length_zero_is_empty(client):
    config = dict(GOOD_CONFIG, min_length=0)
    assert post_summarize(client, "some words here", config).json()["summary"] == ""


@pytest.mark.parametrize(
    "config, reason",
    [
        ({k: v for k, v in GOOD_CONFIG.items() if k != "num_beams"}, "fields"),
        (dict(GOOD_CONFIG, extra=1), "fields"),
        (dict(GOOD_CONFIG, min_length="5"), "type"),
        (dict(GOOD_CONFIG, no_repeat_ngram_size=True), "type"),
        (dict(GOOD_CONFIG, min_length=-1), "min_length"),
        (dict(GOOD_CONFIG, min_length=300), "exceeds"),
        (dict(GOOD_CONFIG, num_beams=0), "num_beams"),
        (dict(GOOD_CONFIG, no_repeat_ngram_size=-1), "no_repeat"),
    ],
)
def test_summarize_rejects_bad_config(client, config, reason):
    resp = post_summarize(client, "a b c", config)
    assert resp.status_code == 400
    assert reason in resp.json()["error"]


def test_summarize_rejects_bad_body(client):
    resp = client.post(
        "/v1/summarize",
        content=b"{not json",
        headers={"content-type": "application/json"},
    )
    assert resp.status_code == 400
    assert "error" in resp.json()
    assert resp.headers["X-Podsum-Proto"] == "1"

    resp = client.post("/v1/summarize", json=[1, 2])
    assert resp.status_code == 400

    resp = client.post("/v1/summarize", json={"source": 7, "config": GOOD_CONFIG})
    assert resp.status_code == 400
    assert "source" in resp.json()["error"]

    resp = client.post("/v1/summarize", json={"source": "a b", "config": "fast"})
    assert resp.status_code == 400


def test_embed_matches_local_hash(client):
    texts = ["hello world", "", "ünïcode ☃", "hello world"]
    resp = client.post("/v1/embed", json={"texts": texts, "dim": 16})
    assert resp.status_code == 200
    vectors = resp.json()["vectors"]
    assert len(vectors) == 4
    for text, row in zip(texts, vectors):
        assert np.asarray(row).tobytes() == hash_embed(text, 16).tobytes()
    # identical texts, identical vectors
    assert vectors[0] == vectors[3]


def test_embed_vectors_are_unit_norm(client):
    resp = client.post("/v1/embed", json={"texts": ["a", "bb"], "dim": 9})
    for row in resp.json()["vectors"]:
        assert abs(float(np.linalg.norm(row)) - 1.0) < 1e-12


@pytest.mark.parametrize(
    "body",
    [
        {"texts": "not a list", "dim": 4},
        {"texts": ["ok", 3], "dim": 4},
        {"texts": ["ok"], "dim": 0},
        {"texts": ["ok"], "dim": True},
        {"texts": ["ok"]},
    ],
)
def test_embed_rejects_bad_requests(client, body):
    resp = client.post("/v1/embed", json=body)
    assert resp.status_code == 400
    assert "error" in resp.json()


def test_oversize_body_rejected():
    small = TestClient(create_app(ServerConfig(max_request_bytes=64)))
    resp = small.post(
        "/v1/embed", json={"texts": ["x" * 200], "dim": 4}
    )
    assert resp.status_code == 400
    assert "exceeds" in resp.json()["error"]


def test_pretrained_mode_is_unavailable():
    client = TestClient(create_app(ServerConfig(mode="pretrained")))
    resp = client.post("/v1/summarize", json={"source": "a", "config": GOOD_CONFIG})
    assert resp.status_code == 503
    assert "error" in resp.json()
    resp = client.post("/v1/embed", json={"texts": ["a"], "dim": 4})
    assert resp.status_code == 503


def test_hash_reference_vectors():
    # published test vectors for both primitives
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8
    expected = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    draws = splitmix64_stream(0, 3)
    assert [int(d * 2.0**53) for d in draws] == [u >> 11 for u in expected]


def test_config_echo_is_byte_identical(client):
    sent = dict(GOOD_CONFIG, length_penalty=1.7)
    resp = post_summarize(client, "a b c d e f g", sent)
    echo = resp.json()["config"]
    assert json.dumps(echo, sort_keys=True) == json.dumps(sent, sort_keys=True)
