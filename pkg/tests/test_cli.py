"""Command-line pipeline: golden comparisons, determinism, exit codes."""

import json
import math
from pathlib import Path

import pytest

from hexserve import hexgrid
from hexserve.cli import main
from hexserve.config import ConfigError, PipelineConfig

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"
CONFIG = ["--config", str(FIXTURES / "toy_config.json")]


@pytest.fixture()
def pipeline(tmp_path):
    """Run ingest + aggregate once per test that needs the artifacts."""
    features = tmp_path / "features.jsonl"
    aggregates = tmp_path / "aggregates.jsonl"
    assert main(["ingest-osm", str(FIXTURES / "toy_city.osm"), "-o", str(features), *CONFIG]) == 0
    assert main(["ingest-stops", str(FIXTURES / "toy_stops.csv"), "-o", str(aggregates), *CONFIG]) == 0
    return tmp_path


class TestIngest:
    def test_features_match_golden_bytes(self, pipeline):
        got = (pipeline / "features.jsonl").read_bytes()
        assert got == (GOLDEN / "features.jsonl").read_bytes()

    def test_rerun_byte_identical(self, pipeline):
        first = (pipeline / "features.jsonl").read_bytes()
        assert main(
            ["ingest-osm", str(FIXTURES / "toy_city.osm"), "-o", str(pipeline / "again.jsonl"), *CONFIG]
        ) == 0
        assert (pipeline / "again.jsonl").read_bytes() == first

    def test_aggregates_match_golden_values(self, pipeline):
        def load(path):
            return [json.loads(line) for line in path.read_text().splitlines() if line]

        got = load(pipeline / "aggregates.jsonl")
        want = load(GOLDEN / "aggregates.jsonl")
        assert len(got) == len(want)
        for g, w in zip(got, want):
            assert g["cell"] == w["cell"]
            assert g["n_stops"] == w["n_stops"]
            assert g["mean_s"] == pytest.approx(w["mean_s"], abs=1e-9)
            assert g["median_s"] == pytest.approx(w["median_s"], abs=1e-9)

    def test_empty_osm_writes_empty_file(self, tmp_path):
        empty = tmp_path / "empty.osm"
        empty.write_text('<?xml version="1.0"?><osm version="0.6"></osm>')
        out = tmp_path / "features.jsonl"
        assert main(["ingest-osm", str(empty), "-o", str(out)]) == 0
        assert out.read_text() == ""

    def test_convert_lmrrc(self, tmp_path):
        out = tmp_path / "stops.csv"
        code = main(
            [
                "convert-lmrrc",
                str(FIXTURES / "lmrrc_route_data.json"),
                str(FIXTURES / "lmrrc_package_data.json"),
                "-o",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "route_id,stop_id,lat,lng,service_time_s"
        assert len(lines) == 18  # header + 17 stops


class TestTrainClusterExport:
    def test_full_pipeline(self, pipeline):
        model = pipeline / "model.json"
        cv = pipeline / "cv.json"
        clus = pipeline / "cluster.json"
        geo = pipeline / "map.geojson"

        assert main(
            ["train", str(FIXTURES / "toy_stops.csv"), str(pipeline / "features.jsonl"),
             "-o", str(model), "--report", str(cv), *CONFIG]
        ) == 0
        assert main(
            ["cluster", str(model), str(pipeline / "features.jsonl"),
             str(FIXTURES / "toy_stops.csv"), "-o", str(clus), *CONFIG]
        ) == 0
        assert main(
            ["export", str(pipeline / "features.jsonl"), str(FIXTURES / "toy_stops.csv"),
             "-o", str(geo), "--model", str(model), "--cluster-report", str(clus), *CONFIG]
        ) == 0

        report = json.loads(cv.read_text())
        assert report["k"] == 4
        assert len(report["per_fold"]) == 4

        cluster_doc = json.loads(clus.read_text())
        expected = json.loads((GOLDEN / "cluster_expected.json").read_text())
        assert cluster_doc["assignment"] == expected["assignment"]
        for g, w in zip(cluster_doc["clusters"], expected["clusters"]):
            assert g["medoid_cell"] == w["medoid_cell"]
            assert g["median_service_time_s"] == pytest.approx(w["median_service_time_s"], abs=1e-9)
        assert cluster_doc["t_test"]["t"] == pytest.approx(expected["t_test"]["t"], abs=1e-9)

        self._check_geojson(geo, cluster_doc)

    def _check_geojson(self, path, cluster_doc):
        doc = json.loads(path.read_text())
        assert doc["type"] == "FeatureCollection"
        assert len(doc["features"]) == 8
        medoids = {c["medoid_cell"] for c in cluster_doc["clusters"]}
        seen_medoids = set()
        for feature in doc["features"]:
            assert feature["type"] == "Feature"
            geom = feature["geometry"]
            assert geom["type"] == "Polygon"
            (ring,) = geom["coordinates"]
            assert ring[0] == ring[-1]  # closed
            assert len(ring) == 7  # 6 vertices + repeat
            props = feature["properties"]
            cell = hexgrid.CellId.from_string(props["cell"])
            boundary = hexgrid.cell_boundary(cell)
            for [lng, lat], vert in zip(ring[:-1], boundary.vertices):
                assert lng == vert.lng and lat == vert.lat
            assert props["cluster"] == cluster_doc["assignment"].get(props["cell"])
            if props["medoid"]:
                seen_medoids.add(props["cell"])
            assert props["n_stops"] >= 1
            assert math.isfinite(props["predicted_mu_log_s"])
            assert props["predicted_sigma_log_s"] > 0
        assert seen_medoids == medoids

    def test_single_cluster_has_no_test(self, pipeline):
        model = pipeline / "model.json"
        clus = pipeline / "cluster1.json"
        assert main(
            ["train", str(FIXTURES / "toy_stops.csv"), str(pipeline / "features.jsonl"),
             "-o", str(model), "--report", str(pipeline / "cv.json"), *CONFIG]
        ) == 0
        assert main(
            ["cluster", str(model), str(pipeline / "features.jsonl"),
             str(FIXTURES / "toy_stops.csv"), "-o", str(clus), "--n-clusters", "1", *CONFIG]
        ) == 0
        doc = json.loads(clus.read_text())
        assert doc["k"] == 1
        assert doc["t_test"] is None
        assert len(doc["clusters"]) == 1
        assert set(doc["assignment"].values()) == {0}

    def test_export_without_model_or_clusters(self, pipeline):
        geo = pipeline / "bare.geojson"
        assert main(
            ["export", str(pipeline / "features.jsonl"), str(FIXTURES / "toy_stops.csv"),
             "-o", str(geo), *CONFIG]
        ) == 0
        doc = json.loads(geo.read_text())
        props = doc["features"][0]["properties"]
        assert "predicted_mu_log_s" not in props
        assert "cluster" not in props

    def test_train_deterministic(self, pipeline):
        out1, out2 = pipeline / "m1.json", pipeline / "m2.json"
        for out in (out1, out2):
            assert main(
                ["train", str(FIXTURES / "toy_stops.csv"), str(pipeline / "features.jsonl"),
                 "-o", str(out), "--report", str(pipeline / f"{out.stem}_cv.json"), *CONFIG]
            ) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert (pipeline / "m1_cv.json").read_bytes() == (pipeline / "m2_cv.json").read_bytes()


class TestErrorHandling:
    def test_missing_input_file(self, tmp_path):
        assert main(["ingest-osm", str(tmp_path / "nope.osm"), "-o", str(tmp_path / "o")]) == 1

    def test_malformed_osm(self, tmp_path, capsys):
        bad = tmp_path / "bad.osm"
        bad.write_text("<osm><node id=</osm>")
        assert main(["ingest-osm", str(bad), "-o", str(tmp_path / "o")]) == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"resolutoin": 9}')
        assert main(
            ["ingest-stops", str(FIXTURES / "toy_stops.csv"), "-o", str(tmp_path / "o"),
             "--config", str(cfg)]
        ) == 1

    def test_missing_model_for_cluster(self, tmp_path):
        assert main(
            ["cluster", str(tmp_path / "missing.json"), str(GOLDEN / "features.jsonl"),
             str(FIXTURES / "toy_stops.csv"), "-o", str(tmp_path / "c.json")]
        ) == 1

    def test_bad_stops_schema(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("route,stop\nR,S\n")
        assert main(["ingest-stops", str(bad), "-o", str(tmp_path / "o")]) == 1


class TestConfig:
    def test_round_trip(self):
        cfg = PipelineConfig.from_file(FIXTURES / "toy_config.json")
        again = PipelineConfig.from_obj(cfg.to_json_obj())
        assert cfg == again
        assert cfg.fit.n_stages == 40
        assert cfg.fit.seed == 7  # inherits the top-level seed

    def test_defaults(self):
        cfg = PipelineConfig()
        assert cfg.resolution == 9
        assert cfg.k_folds == 5
        assert cfg.n_clusters == 2
        assert cfg.top_k_features == 50
        assert cfg.fit.n_stages == 500
        assert cfg.fit.learning_rate == 0.01
        assert cfg.fit.max_depth == 3
        assert cfg.fit.min_samples_leaf == 1

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            PipelineConfig.from_obj({"resolution": 9, "bogus": 1})
        with pytest.raises(ConfigError, match="unknown fit keys"):
            PipelineConfig.from_obj({"fit": {"stages": 5}})
