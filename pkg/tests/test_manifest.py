import json
import math

import pytest

from magnitude import (
    ManifestError,
    RunManifest,
    ShapeSpec,
    load_manifest,
    read_table,
    run,
    save_manifest,
)
from magnitude.manifest import SWEEP_COLUMNS, sweep_table
from magnitude.analysis import sweep


def demo_manifest(**overrides):
    fields = dict(
        shape=ShapeSpec("segment", {"m": 21}),
        scales=(0.5, 2.0),
        output=None,
    )
    fields.update(overrides)
    return RunManifest(**fields)


class TestRoundTrip:
    def test_dict_round_trip(self):
        m = demo_manifest(residual_gate=1e-8, max_refinements=2)
        assert RunManifest.from_dict(m.to_dict()) == m

    def test_file_round_trip(self, tmp_path):
        m = demo_manifest(output="sweep.tsv")
        path = tmp_path / "run.json"
        save_manifest(m, path)
        assert load_manifest(path) == m
        data = json.loads(path.read_text())
        assert data["format"] == "magnitude-run/1"
        assert data["shape"] == {"kind": "segment", "params": {"m": 21}}

    def test_defaults_fill_in(self):
        m = RunManifest.from_dict(
            {"shape": {"kind": "point", "params": {}}, "scales": [1.0]}
        )
        assert m.residual_gate == 1e-6
        assert m.max_refinements == 3
        assert m.torus_variant == "caption"
        assert m.output is None


class TestValidation:
    def test_shape_type_checked(self):
        with pytest.raises(ManifestError):
            RunManifest(shape="segment", scales=(1.0,))

    def test_bad_torus_variant(self):
        with pytest.raises(ManifestError):
            demo_manifest(torus_variant="tabled")

    @pytest.mark.parametrize(
        "data",
        [
            {"scales": [1.0]},  # no shape
            {"shape": {"kind": "point", "params": {}}},  # no scales
            {"shape": {"kind": "point", "params": {}}, "scales": ["x"]},
            {
                "format": "magnitude-run/9",
                "shape": {"kind": "point", "params": {}},
                "scales": [1.0],
            },
        ],
    )
    def test_malformed_dicts(self, data):
        with pytest.raises(ManifestError):
            RunManifest.from_dict(data)

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ManifestError):
            load_manifest(path)

    def test_non_object_root(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ManifestError):
            load_manifest(path)


class TestSweepTable:
    def test_columns_and_nan_for_missing_valuation(self):
        result = sweep(ShapeSpec("cantor", {"level": 1}), [1.0])
        table = sweep_table(result)
        assert table.columns == SWEEP_COLUMNS
        assert table.n_rows == 1
        assert math.isnan(table.column("penguin")[0])
        assert table.column("n_points")[0] == 4.0

    def test_valuation_column_filled(self):
        result = sweep(ShapeSpec("segment", {"m": 11}), [0.5])
        table = sweep_table(result)
        assert table.column("penguin")[0] == 1.25


class TestRun:
    def test_run_writes_output(self, tmp_path):
        out = tmp_path / "sweep.tsv"
        result = run(demo_manifest(output=str(out)))
        assert out.exists()
        table = read_table(out)
        assert table.n_rows == len(result.records) == 2
        assert table.column("t").tolist() == [0.5, 2.0]

    def test_run_without_output_writes_nothing(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        run(demo_manifest())
        assert list(tmp_path.iterdir()) == []

    def test_reruns_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        run(demo_manifest(output=str(a)))
        run(demo_manifest(output=str(b)))
        assert a.read_bytes() == b.read_bytes()
