import csv
import io
import json

import pytest

from wproj.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_success(self, capsys):
        code, out, _ = run(capsys, "wgcd", "--weights", "2,4", "--tuple", "8:16")
        assert code == 0
        assert out.strip() == "2"

    def test_domain_error(self, capsys):
        code, _, err = run(capsys, "normalize", "--weights", "2,4", "--tuple", "0:0")
        assert code == 1
        assert "all-zero" in err

    def test_usage_error_malformed_tuple(self, capsys):
        code, _, err = run(capsys, "wgcd", "--weights", "2,4", "--tuple", "a:b")
        assert code == 2
        assert "usage error" in err

    def test_usage_error_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "wgcd", "--weights", "2,4", "--nope", "1")
        assert code == 2

    def test_usage_error_length_mismatch(self, capsys):
        code, _, _ = run(capsys, "wgcd", "--weights", "2,4", "--tuple", "1:2:3")
        assert code == 2


class TestOutputExamples:
    def test_height_exact_then_decimal(self, capsys):
        code, out, _ = run(capsys, "height", "--weights", "2,4", "--point", "4:8")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "(1/4)*log(2)"
        assert lines[1].startswith("0.173286795139986")

    def test_factor(self, capsys):
        code, out, _ = run(capsys, "factor", "-60")
        assert code == 0
        assert out.strip() == "-2^2 * 3 * 5"

    def test_canonical_and_equals(self, capsys):
        code, out, _ = run(
            capsys, "canonical", "--weights", "2,4,6,10", "--tuple", "3:9:27:243"
        )
        assert (code, out.strip()) == (0, "1:1:1:1")
        code, out, _ = run(
            capsys,
            "equals",
            "--weights",
            "2,4,6,10",
            "--left",
            "3:9:27:243",
            "--right",
            "1:1:1:1",
        )
        assert (code, out.strip()) == (0, "true")

    def test_hgcd(self, capsys):
        code, out, _ = run(capsys, "hgcd", "--a", "12", "--b", "18")
        assert code == 0
        assert out.splitlines()[0] == "log(2) + log(3)"

    def test_singular(self, capsys):
        code, out, _ = run(
            capsys, "singular", "--weights", "1,2,3", "--tuple", "0:1:0"
        )
        assert (code, out.strip()) == (0, "true")
        code, out, _ = run(
            capsys, "singular", "--weights", "1,2,3", "--tuple", "1:1:1"
        )
        assert (code, out.strip()) == (0, "false")

    def test_reduce_weights(self, capsys):
        code, out, _ = run(capsys, "reduce-weights", "--weights", "2,4,6")
        assert code == 0
        assert "1" in out and "d: 2" in out

    def test_version_echo_on_stderr(self, capsys):
        code, out, err = run(capsys, "wgcd", "--weights", "2,4", "--tuple", "8:16")
        assert err.startswith("# wproj ")
        assert "wgcd" in err


class TestFormats:
    def test_json_same_information(self, capsys):
        code, out, _ = run(
            capsys,
            "height",
            "--weights",
            "2,4",
            "--point",
            "4:8",
            "--format",
            "json",
        )
        doc = json.loads(out)
        assert doc["lwh"]["exact"] == "(1/4)*log(2)"
        assert doc["lwh"]["decimal"].startswith("0.173286795139986")
        assert doc["wh_m_power"] == 2
        assert doc["m"] == 4

    def test_csv_same_information(self, capsys):
        code, out, _ = run(
            capsys, "wgcd", "--weights", "2,4", "--tuple", "8:16", "--format", "csv"
        )
        rows = list(csv.DictReader(io.StringIO(out)))
        assert {"key": "wgcd", "value": "2"} in rows

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "result.json"
        code, out, _ = run(
            capsys,
            "wgcd",
            "--weights",
            "2,4",
            "--tuple",
            "8:16",
            "--format",
            "json",
            "--out",
            str(target),
        )
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["wgcd"] == 2


class TestRoundTrip:
    def test_normalize_output_reparses(self, capsys):
        _, out, _ = run(capsys, "normalize", "--weights", "2,4", "--tuple", "8:16")
        again_code, again, _ = run(
            capsys, "normalize", "--weights", "2,4", "--tuple", out.strip()
        )
        assert again_code == 0 and again == out

    def test_rational_point_integralized(self, capsys):
        _, out, _ = run(capsys, "height", "--weights", "2,4", "--point", "1/2:1/4")
        _, out2, _ = run(capsys, "height", "--weights", "2,4", "--point", "2:4")
        assert out == out2


class TestPolyCommands:
    @pytest.fixture()
    def poly_file(self, tmp_path):
        path = tmp_path / "f.wpoly"
        path.write_text("weights: x0=1 x1=2\n\nx0^2 - x1\n")
        return str(path)

    def test_poly_check(self, capsys, poly_file):
        code, out, _ = run(capsys, "poly-check", "--poly", poly_file)
        assert code == 0
        assert "degree 2" in out

    def test_poly_check_malformed(self, capsys, tmp_path):
        path = tmp_path / "bad.wpoly"
        path.write_text("weights: x0=1\n\nx0 + %\n")
        code, _, err = run(capsys, "poly-check", "--poly", str(path))
        assert code == 2

    def test_poly_eval(self, capsys, poly_file):
        code, out, _ = run(capsys, "poly-eval", "--poly", poly_file, "--point", "3:4")
        assert (code, out.strip()) == (0, "5")

    def test_subscheme_height(self, capsys, tmp_path):
        path = tmp_path / "z.wpoly"
        path.write_text("weights: x0=1 x1=2 x2=3\n\nx1\n\nx2\n")
        code, out, _ = run(
            capsys,
            "subscheme-height",
            "--poly",
            str(path),
            "--point",
            "1:4:8",
            "--codim",
            "2",
        )
        assert code == 0
        assert out.splitlines()[0] == "(2)*log(2)"


class TestSearchCommand:
    def test_plain_listing(self, capsys):
        code, out, _ = run(capsys, "search", "--weights", "1,1", "--bound", "2")
        assert code == 0
        body = [ln for ln in out.splitlines() if not ln.startswith("#")]
        assert len(body) == 8
        assert any(ln.startswith("0:1") for ln in body)

    def test_json_report(self, capsys, tmp_path):
        poly = tmp_path / "f.wpoly"
        poly.write_text("weights: x0=1 x1=1\n\nx0 x1\n")
        target = tmp_path / "points.json"
        code, _, _ = run(
            capsys,
            "search",
            "--weights",
            "1,1",
            "--bound",
            "2",
            "--poly",
            str(poly),
            "--format",
            "json",
            "--out",
            str(target),
        )
        assert code == 0
        doc = json.loads(target.read_text())
        assert {tuple(p["coords"]) for p in doc["points"]} == {(0, 1), (1, 0)}
        assert doc["phase1_candidates"] == 25

    def test_require_nonzero_by_name(self, capsys, tmp_path):
        poly = tmp_path / "f.wpoly"
        poly.write_text("weights: a=1 b=1\n\na b\n")
        code, out, _ = run(
            capsys,
            "search",
            "--weights",
            "1,1",
            "--bound",
            "2",
            "--poly",
            str(poly),
            "--require-nonzero",
            "a",
        )
        body = [ln for ln in out.splitlines() if not ln.startswith("#")]
        assert body == ["1:0  wh^1=1"]

    def test_poly_weight_mismatch(self, capsys, tmp_path):
        poly = tmp_path / "f.wpoly"
        poly.write_text("weights: a=2 b=3\n\na^3\n")
        code, _, _ = run(
            capsys,
            "search",
            "--weights",
            "1,1",
            "--bound",
            "2",
            "--poly",
            str(poly),
        )
        assert code == 2


class TestVojtaScanCommand:
    @pytest.fixture()
    def z_file(self, tmp_path):
        path = tmp_path / "z.wpoly"
        path.write_text("weights: x0=1 x1=2 x2=3\n\nx1\n\nx2\n")
        return str(path)

    def _argv(self, z_file, **over):
        base = {
            "--weights": "1,2,3",
            "--poly": z_file,
            "--codim": "2",
            "--eps": "1/2",
            "--delta": "1/2",
            "--samples": "25",
            "--box": "20,20,20",
            "--seed": "42",
        }
        base.update(over)
        argv = ["vojta-scan"]
        for k, v in base.items():
            if v is not None:
                argv += [k, v]
        return argv

    def test_end_to_end(self, capsys, z_file, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, *self._argv(z_file, **{"--out": str(target)}))
        assert code == 0
        doc = json.loads(target.read_text())
        assert doc["schema_version"] == 1
        assert doc["config"]["seed"] == 42
        assert len(doc["records"]) == 25

    def test_deterministic_across_jobs(self, capsys, z_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, *self._argv(z_file, **{"--out": str(a), "--jobs": "1"}))
        run(capsys, *self._argv(z_file, **{"--out": str(b), "--jobs": "2"}))
        assert a.read_text() == b.read_text()

    def test_seed_autogenerated_and_printed(self, capsys, z_file):
        argv = [x for x in self._argv(z_file) if x != "--seed" and x != "42"]
        code, out, err = run(capsys, *argv)
        assert code == 0
        assert "# generated seed:" in err
        seed = int(err.split("# generated seed:")[1].splitlines()[0])
        assert json.loads(out)["config"]["seed"] == seed

    def test_codim_one_rejected(self, capsys, z_file):
        code, _, err = run(capsys, *self._argv(z_file, **{"--codim": "1"}))
        assert code == 1
