import math
import shutil
import subprocess

import numpy as np
import pytest

from magnitude import Table, write_table
from magnitude.analysis import GASKET_EXPONENT
from magnitude.cli import DEFAULT_SCALES, main, parse_scales


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def table_lines(out):
    lines = out.strip().split("\n")
    return lines[0], [ln.split("\t") for ln in lines[1:]]


class TestParseScales:
    def test_log_range(self):
        ts = parse_scales("1:100:log:3")
        assert ts == pytest.approx((1.0, 10.0, 100.0), rel=1e-12)

    def test_default_is_25_point_log_range(self):
        ts = parse_scales(DEFAULT_SCALES)
        assert len(ts) == 25
        assert ts[0] == pytest.approx(0.1) and ts[-1] == pytest.approx(1000.0)

    def test_literal_list(self):
        assert parse_scales("0.5, 2,10") == (0.5, 2.0, 10.0)

    @pytest.mark.parametrize(
        "text",
        ["1:100:lin:5", "1:100:log", "5:1:log:3", "1:100:log:1", "a,b", "1;2"],
    )
    def test_bad_syntax(self, text):
        with pytest.raises(ValueError):
            parse_scales(text)


class TestMagnitudeCommand:
    def test_point(self, capsys):
        code, out, _ = run_cli(capsys, "magnitude", "--shape", "point", "--t", "1")
        assert code == 0
        header, rows = table_lines(out)
        assert header == "#magnitude\tresidual_inf"
        assert rows == [["1.0", "0.0"]]

    def test_segment_m101_t10(self, capsys):
        code, out, _ = run_cli(
            capsys, "magnitude", "--shape", "segment", "--m", "101", "--t", "10"
        )
        assert code == 0
        _, rows = table_lines(out)
        assert float(rows[0][0]) == pytest.approx(6.0, rel=0.01)

    def test_output_file(self, capsys, tmp_path):
        out_path = tmp_path / "mag.tsv"
        code, out, _ = run_cli(
            capsys,
            "magnitude", "--shape", "point", "--t", "2", "-o", str(out_path),
        )
        assert code == 0
        assert out == ""
        assert out_path.read_text().startswith("#magnitude")


class TestExitCodes:
    def test_unknown_flag_is_usage(self, capsys):
        code, *_ = run_cli(capsys, "magnitude", "--shape", "point", "--t", "1", "--bogus")
        assert code == 2

    def test_missing_required_param(self, capsys):
        code, _, err = run_cli(capsys, "magnitude", "--shape", "segment", "--t", "1")
        assert code == 2
        assert "requires --m" in err

    def test_inapplicable_param(self, capsys):
        code, _, err = run_cli(
            capsys,
            "magnitude", "--shape", "square", "--m", "5", "--angle", "1", "--t", "1",
        )
        assert code == 2
        assert "--angle" in err

    def test_unreachable_gate_is_solver_error(self, capsys):
        code, _, err = run_cli(
            capsys,
            "magnitude", "--shape", "segment", "--m", "30", "--t", "1",
            "--residual-gate", "1e-30",
        )
        assert code == 3
        assert err.startswith("error: solver:")

    def test_profile_on_disc_unsupported(self, capsys):
        code, _, err = run_cli(
            capsys, "profile", "--shape", "disc", "--target-n", "30", "--t", "1"
        )
        assert code == 4
        assert err.startswith("error: unsupported:")

    def test_profile_even_grid_unsupported(self, capsys):
        code, *_ = run_cli(
            capsys, "profile", "--shape", "square", "--m", "4", "--t", "1"
        )
        assert code == 4

    def test_missing_manifest_is_io_error(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "sweep", "--manifest", str(tmp_path / "nope.json")
        )
        assert code == 5
        assert err.startswith("error: io:")

    def test_unwritable_output_is_io_error(self, capsys, tmp_path):
        code, *_ = run_cli(
            capsys,
            "magnitude", "--shape", "point", "--t", "1",
            "-o", str(tmp_path / "missing" / "out.tsv"),
        )
        assert code == 5

    def test_corrupt_fit_input_is_io_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("no header here\n")
        code, *_ = run_cli(
            capsys, "fit", "--input", str(bad), "--window", "1", "10"
        )
        assert code == 5

    def test_bad_scales_is_usage(self, capsys):
        code, *_ = run_cli(
            capsys, "sweep", "--shape", "point", "--scales", "5:1:log:3"
        )
        assert code == 2


class TestSweepCommand:
    def test_point_default_scales(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--shape", "point")
        assert code == 0
        header, rows = table_lines(out)
        assert header == "#t\tn_points\tmagnitude\tpenguin\tresidual_inf"
        assert len(rows) == 25
        assert all(r[2] == "1.0" for r in rows)

    def test_square_sweep_monotone(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sweep", "--shape", "square", "--m", "31",
            "--scales", "0.1:1000:log:25",
        )
        assert code == 0
        _, rows = table_lines(out)
        assert len(rows) == 25
        mags = [float(r[2]) for r in rows]
        assert all(a < b for a, b in zip(mags, mags[1:]))
        assert mags[-1] == pytest.approx(961, rel=1e-6)  # saturated by t=1000

    def test_output_and_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        for path in (a, b):
            code, out, _ = run_cli(
                capsys,
                "sweep", "--shape", "segment", "--m", "21",
                "--scales", "1,2,4", "-o", str(path),
            )
            assert code == 0 and out == ""
        assert a.read_bytes() == b.read_bytes()

    def test_emit_manifest_round_trip(self, capsys, tmp_path):
        manifest_path = tmp_path / "run.json"
        code, direct, _ = run_cli(
            capsys,
            "sweep", "--shape", "segment", "--m", "11",
            "--scales", "0.5,2", "--emit-manifest", str(manifest_path),
        )
        assert code == 0
        code, replayed, _ = run_cli(capsys, "sweep", "--manifest", str(manifest_path))
        assert code == 0
        assert replayed == direct

    def test_manifest_excludes_inline_flags(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys,
            "sweep", "--manifest", str(tmp_path / "m.json"), "--shape", "point",
        )
        assert code == 2
        assert "--shape" in err


class TestWeightsCommand:
    def test_square_columns(self, capsys):
        code, out, _ = run_cli(
            capsys, "weights", "--shape", "square", "--m", "3", "--t", "1"
        )
        assert code == 0
        header, rows = table_lines(out)
        assert header == "#x\ty\tweight\tnormalized_weight"
        assert len(rows) == 9

    def test_fractal_normalized_is_nan(self, capsys):
        code, out, _ = run_cli(
            capsys, "weights", "--shape", "cantor", "--level", "1", "--t", "1"
        )
        assert code == 0
        header, rows = table_lines(out)
        assert header == "#x\tweight\tnormalized_weight"
        assert all(r[2] == "nan" for r in rows)


class TestProfileCommand:
    def test_minimal_square(self, capsys):
        code, out, _ = run_cli(
            capsys, "profile", "--shape", "square", "--m", "3", "--t", "1"
        )
        assert code == 0
        header, rows = table_lines(out)
        assert header == "#d\tnormalized_weight"
        assert [r[0] for r in rows] == ["0.0", "0.5"]


class TestLatticeSumCommand:
    def test_dim1(self, capsys):
        code, out, _ = run_cli(
            capsys, "lattice-sum", "--dim", "1", "--spacing", "0.01"
        )
        assert code == 0
        _, rows = table_lines(out)
        value, target = float(rows[0][0]), float(rows[0][1])
        assert target == 2.0
        assert value == pytest.approx(2.0000166666388792, rel=1e-9)

    def test_dim2_custom_cutoff(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "lattice-sum", "--dim", "2", "--spacing", "0.1", "--cutoff", "25",
        )
        assert code == 0
        _, rows = table_lines(out)
        assert float(rows[0][1]) == pytest.approx(2 * math.pi, rel=1e-15)


class TestFitCommand:
    def write_sweep(self, path, scales, mags):
        rows = [[t, 100.0, m, math.nan, 0.0] for t, m in zip(scales, mags)]
        write_table(
            Table(
                columns=("t", "n_points", "magnitude", "penguin", "residual_inf"),
                rows=rows,
            ),
            path,
        )

    def test_growth(self, capsys, tmp_path):
        path = tmp_path / "sweep.tsv"
        ts = np.geomspace(1, 64, 7)
        self.write_sweep(path, ts, 2.0 * ts**0.7)
        code, out, _ = run_cli(
            capsys, "fit", "--input", str(path), "--window", "1", "64"
        )
        assert code == 0
        header, rows = table_lines(out)
        assert header == "#exponent\tcoefficient\trms_residual\tn_records"
        assert float(rows[0][0]) == pytest.approx(0.7, abs=1e-10)
        assert float(rows[0][1]) == pytest.approx(2.0, rel=1e-10)

    def test_sierpinski(self, capsys, tmp_path):
        path = tmp_path / "gasket.tsv"
        ts = [5.0, 10.0, 20.0, 40.0]
        self.write_sweep(path, ts, [t**GASKET_EXPONENT / 3 + 1.5 for t in ts])
        code, out, _ = run_cli(
            capsys,
            "fit", "--kind", "sierpinski", "--input", str(path),
            "--window", "5", "40",
        )
        assert code == 0
        _, rows = table_lines(out)
        assert len(rows) == 3  # (5,10), (10,20), (20,40)
        assert float(rows[0][0]) == pytest.approx(1 / 3, rel=1e-12)

    def test_window_without_pairs_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "sparse.tsv"
        self.write_sweep(path, [5.0, 12.0, 33.0, 80.0], [2.0, 3.0, 4.0, 5.0])
        code, _, err = run_cli(
            capsys,
            "fit", "--kind", "sierpinski", "--input", str(path),
            "--window", "5", "80",
        )
        assert code == 2
        assert "pairs" in err

    def test_saturation_exclusion_via_min_spacing(self, capsys, tmp_path):
        path = tmp_path / "sat.tsv"
        ts = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
        mags = [3.0 * t for t in ts[:4]] + [100.0, 100.0]
        self.write_sweep(path, ts, mags)
        code, out, _ = run_cli(
            capsys,
            "fit", "--input", str(path), "--window", "1", "32",
            "--min-spacing", "0.125",
        )
        assert code == 0
        _, rows = table_lines(out)
        assert float(rows[0][0]) == pytest.approx(1.0, abs=1e-12)
        assert int(float(rows[0][3])) == 4


class TestShapesList:
    def test_lists_all_kinds(self, capsys):
        code, out, _ = run_cli(capsys, "shapes-list")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "#kind\tparams\tdescription"
        kinds = {ln.split("\t")[0] for ln in lines[1:]}
        assert "square" in kinds and "sierpinski" in kinds
        assert len(kinds) == 11


class TestThreadControls:
    def test_threads_flag(self, capsys):
        code, *_ = run_cli(
            capsys, "--threads", "1", "magnitude", "--shape", "point", "--t", "1"
        )
        assert code == 0

    def test_zero_threads_rejected(self, capsys):
        code, _, err = run_cli(
            capsys, "--threads", "0", "magnitude", "--shape", "point", "--t", "1"
        )
        assert code == 2
        assert "thread limit" in err

    def test_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("MAGNITUDE_THREADS", "1")
        code, *_ = run_cli(capsys, "magnitude", "--shape", "point", "--t", "1")
        assert code == 0

    def test_bad_env_value(self, capsys, monkeypatch):
        monkeypatch.setenv("MAGNITUDE_THREADS", "lots")
        code, *_ = run_cli(capsys, "magnitude", "--shape", "point", "--t", "1")
        assert code == 2


@pytest.mark.skipif(shutil.which("magnitude") is None, reason="script not on PATH")
def test_console_script_runs():
    proc = subprocess.run(
        ["magnitude", "magnitude", "--shape", "point", "--t", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "1.0\t0.0"
