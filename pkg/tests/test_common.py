import json
import logging

import pytest

from src.common.config import Settings, load_settings
from src.common.diagnostics import _shape, validate_io
from src.common.errors import InconsistentArtifactError
from src.graph.stimulus import Stimulus
from src.persist.artifacts import content_hash, read_artifact, write_artifact
from src.sensors import sensor


def test_settings_defaults(tmp_path):
    assert load_settings(tmp_path / "missing.yml") == Settings()


def test_settings_from_yaml(tmp_path):
    path = tmp_path / "settings.yml"
    path.write_text("compiler:\n  relay_policy: programmable\nexperiments:\n  batch_size: 2\n")
    s = load_settings(path)
    assert s.compiler.relay_policy == "programmable"
    assert s.experiments.batch_size == 2
    assert s.scheduler.settle_rounds == 8


def test_artifact_round_trip(tmp_path):
    path = tmp_path / "a.json"
    art = write_artifact(path, "dfg", {"x": [1, 2]}, {"graph": "abc"})
    again = read_artifact(path, "dfg")
    assert again == art
    assert again.content_hash == content_hash({"x": [1, 2]})
    again.require(graph="abc")
    with pytest.raises(InconsistentArtifactError, match="does not match graph"):
        again.require(graph="abd")


def test_artifact_rejects_wrong_kind_and_tampering(tmp_path):
    path = tmp_path / "a.json"
    write_artifact(path, "schedule", {"x": 1})
    with pytest.raises(InconsistentArtifactError, match="expected dfg"):
        read_artifact(path, "dfg")
    data = json.loads(path.read_text())
    data["payload"]["x"] = 2
    path.write_text(json.dumps(data))
    with pytest.raises(InconsistentArtifactError, match="payload does not match"):
        read_artifact(path, "schedule")
    path.write_text("{}")
    with pytest.raises(InconsistentArtifactError, match="unreadable"):
        read_artifact(path, "schedule")


def test_content_hash_ignores_key_order():
    assert content_hash({"a": 1, "b": 2}) == content_hash({"b": 2, "a": 1})


def test_sensor_logs_each_run(caplog):
    @sensor("demo")
    def stage(code):
        return code

    with caplog.at_level(logging.INFO, logger="sensors"):
        assert stage(0) == 0
        assert stage(1) == 1
    records = [json.loads(r.getMessage().split("SENSOR: ", 1)[1]) for r in caplog.records]
    assert [r["ok"] for r in records] == [True, False]
    assert records[0]["stage"] == "demo"


def test_validate_io_logs_shapes(caplog):
    @validate_io
    def grow(stimulus):
        return Stimulus(images=stimulus.images * 2)

    with caplog.at_level(logging.INFO, logger="src.common.diagnostics"):
        out = grow(Stimulus(images=({0: (1,)},)))
    assert len(out) == 2
    assert "grow input=Stimulus size=1 output=Stimulus size=2" in caplog.text
    assert _shape(object()) == ("object", None)
