"""HTTP service: endpoint contracts, the 400/422/503 error taxonomy, exact
echo round-trips, and statelessness."""

import json
import math

import pytest
from fastapi.testclient import TestClient

from strokekit.mlp import TrainConfig
from strokekit.pipeline import PipelineConfig, train_recognizer, save_recognizer
from strokekit.service import create_app
from strokekit.synthetic import default_templates, generate

CONFIG = PipelineConfig(passes=2, train=TrainConfig(max_epochs=150))


@pytest.fixture(scope="module")
def models_dir(tmp_path_factory):
    data = generate(default_templates()[:2], 5, noise=0.005, seed=3)
    rec = train_recognizer(data, CONFIG)
    path = tmp_path_factory.mktemp("models")
    save_recognizer(rec, path)
    return path


@pytest.fixture(scope="module")
def client(models_dir):
    return TestClient(create_app(models_dir=models_dir))


@pytest.fixture(scope="module")
def bare_client():
    return TestClient(create_app())


def ink_body(sample):
    return {
        "strokes": [[[p.x, p.y] for p in stroke.points] for stroke in sample.strokes]
    }


class TestUnloaded:
    def test_health_503(self, bare_client):
        r = bare_client.get("/api/health")
        assert r.status_code == 503
        assert r.json() == {"detail": "no model loaded"}

    def test_model_503(self, bare_client):
        assert bare_client.get("/api/model").status_code == 503

    def test_recognize_503(self, bare_client):
        r = bare_client.post("/api/recognize", json={"strokes": [[[0, 0], [1, 1]]]})
        assert r.status_code == 503

    def test_echo_works_without_model(self, bare_client):
        r = bare_client.post("/api/echo", json={"strokes": [[[0, 0], [1, 1]]]})
        assert r.status_code == 200


class TestLoaded:
    def test_health_ok(self, client):
        r = client.get("/api/health")
        assert r.status_code == 200
        assert r.json() == {"status": "ok"}

    def test_model_manifest(self, client, models_dir):
        r = client.get("/api/model")
        assert r.status_code == 200
        doc = r.json()
        on_disk = json.loads((models_dir / "manifest.json").read_text("utf-8"))
        assert set(doc["clusters"]) == set(on_disk["clusters"])
        for cid, entry in doc["clusters"].items():
            assert entry["class_labels"] == on_disk["clusters"][cid]["class_labels"]
            assert entry["layer_sizes"] == on_disk["clusters"][cid]["layer_sizes"]
        assert doc["config"] == on_disk["config"]

    def test_recognize_happy_path(self, client):
        sample = generate(default_templates()[:1], 1, noise=0.005, seed=44)[0]
        r = client.post("/api/recognize", json=ink_body(sample))
        assert r.status_code == 200
        doc = r.json()
        assert doc["label"] == sample.label
        assert doc["cluster_id"] == 1
        assert 0.0 < doc["confidence"] <= 1.0
        assert set(doc["scores"]) == {"ا"}
        # per-stroke reports: tokens tile the stroke from index 0 without gaps
        assert len(doc["strokes"]) == len(sample.strokes)
        for rep in doc["strokes"]:
            tokens = rep["tokens"]
            assert tokens[0][0] == 0
            for (_, end), (start, _) in zip(tokens, tokens[1:]):
                assert start == end + 1
            for cp in rep["critical_points"]:
                assert cp["kind"] in ("maximum", "minimum")
        # one feature row per token, aligned fields
        assert len(doc["features"]) == sum(len(rep["tokens"]) for rep in doc["strokes"])
        for row in doc["features"]:
            assert row["category"] in ("short", "middle_short", "middle_long", "long")
            assert 0.0 <= row["ratio_pct"] <= 100.0
            assert -90.0 <= row["direction_deg"] <= 90.0

    def test_identical_requests_identical_responses(self, client):
        sample = generate(default_templates()[:1], 1, noise=0.01, seed=5)[0]
        body = ink_body(sample)
        a = client.post("/api/recognize", json=body)
        b = client.post("/api/recognize", json=body)
        assert a.content == b.content


class TestEcho:
    def test_round_trip_exact_floats(self, client):
        strokes = [
            [[0.1 + 0.2, math.pi], [1.0000000000000002, -0.0000001]],
            [[5.5, 2.25, 0.0], [5.5, 2.26, 16.7]],
        ]
        r = client.post("/api/echo", json={"strokes": strokes})
        assert r.status_code == 200
        assert r.json()["strokes"] == strokes

    def test_duplicate_points_collapsed(self, client):
        r = client.post(
            "/api/echo", json={"strokes": [[[0, 0], [0, 0], [1, 1], [1, 1], [2, 0]]]}
        )
        assert r.status_code == 200
        assert r.json()["strokes"] == [[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]]


class TestErrorTaxonomy:
    @pytest.mark.parametrize(
        "body",
        [
            b"{not json",
            b"[1, 2, 3]",
            b'{"points": []}',
            b'{"strokes": "abc"}',
            b'{"strokes": [42]}',
            b'{"strokes": [[[0, 0], [1]]]}',
            b'{"strokes": [[[0, 0], [1, 2, 3, 4]]]}',
            b'{"strokes": [[[0, 0], [1, true]]]}',
            b'{"strokes": [[[0, 0], [1, NaN]]]}',
            b'{"strokes": [[[0, 0], [Infinity, 1]]]}',
        ],
    )
    def test_malformed_bodies_400(self, client, body):
        r = client.post("/api/recognize", content=body)
        assert r.status_code == 400, body
        assert "detail" in r.json()

    @pytest.mark.parametrize(
        "body",
        [
            {"strokes": []},
            {"strokes": [[[0, 0]]]},
            {"strokes": [[[3, 4], [3, 4], [3, 4]]]},
        ],
    )
    def test_degenerate_ink_422(self, client, body):
        r = client.post("/api/recognize", json=body)
        assert r.status_code == 422, body

    def test_unknown_cluster_422(self, client):
        # models cover clusters 1 and 2; send three strokes
        sample = generate(default_templates()[2:3], 1, noise=0.005, seed=6)[0]
        r = client.post("/api/recognize", json=ink_body(sample))
        assert r.status_code == 422
        assert "cluster" in r.json()["detail"]

    def test_echo_shares_the_taxonomy(self, client):
        assert client.post("/api/echo", content=b"{bad").status_code == 400
        assert client.post("/api/echo", json={"strokes": []}).status_code == 422


class TestCors:
    def test_localhost_origin_allowed(self, client):
        r = client.options(
            "/api/recognize",
            headers={
                "Origin": "http://localhost:5173",
                "Access-Control-Request-Method": "POST",
            },
        )
        assert r.headers.get("access-control-allow-origin") == "http://localhost:5173"

    def test_foreign_origin_not_allowed(self, client):
        r = client.options(
            "/api/recognize",
            headers={
                "Origin": "https://example.com",
                "Access-Control-Request-Method": "POST",
            },
        )
        assert "access-control-allow-origin" not in r.headers
