import pytest

from translab import SampledFunction
from translab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestModulusCommand:
    def test_eval(self, capsys):
        code, out, _ = run(capsys, "modulus", "--kind", "power", "--lambda", "2",
                           "--alpha", "0.5", "--eval", "0.25")
        assert code == 0
        assert float(out) == 1.0

    def test_invert(self, capsys):
        code, out, _ = run(capsys, "modulus", "--kind", "power", "--lambda", "2",
                           "--alpha", "0.5", "--invert", "1.0")
        assert code == 0
        assert float(out) == pytest.approx(0.25)

    def test_check_report(self, capsys):
        code, out, _ = run(capsys, "modulus", "--kind", "power", "--alpha", "0.5",
                           "--check", "0.1")
        assert code == 0
        assert out.splitlines() == [
            "monotone=true",
            "subadditive=true",
            "vanishes_at_zero=true",
        ]

    def test_table_file(self, capsys, tmp_path):
        table = tmp_path / "beta.txt"
        table.write_text("0 0\n1 0.5\n")
        code, out, _ = run(capsys, "modulus", "--kind", "table", "--file", str(table),
                           "--invert", "0.25")
        assert code == 0
        assert float(out) == pytest.approx(0.5, rel=1e-9)


class TestBuildAndEval:
    def test_round_trip(self, capsys, tmp_path):
        path = tmp_path / "f.txt"
        code, out, _ = run(capsys, "build", "--alpha", "1", "--lambda", "1",
                           "--d", "1", "--m", "1", "--p", "0",
                           "--sample", "0.015625", "--out", str(path))
        assert code == 0 and path.exists()
        code, out, _ = run(capsys, "eval", "--func", str(path), "--at", "0.0625")
        assert code == 0
        assert float(out) == 0.03125

    def test_build_without_sample(self, capsys):
        code, out, _ = run(capsys, "build", "--alpha", "0.5", "--lambda", "2",
                           "--d", "2", "--m", "2", "--p", "1")
        assert code == 0
        assert "q=1" in out


class TestCertifyCommand:
    def test_key_value_output(self, capsys):
        code, out, _ = run(capsys, "certify", "--alpha", "1", "--lambda", "1",
                           "--d", "1", "--m", "1", "--p", "0", "--eps", "0.0078125")
        assert code == 0
        lines = dict(line.split("=", 1) for line in out.splitlines())
        assert lines["n0"] == "1"
        assert lines["certified_count"] == "2"
        assert lines["paper_bound"] == "2"
        assert lines["mode"] == "theoretical"
        assert lines["level_1"] == "2/2"

    def test_empirical_with_file(self, capsys, tmp_path):
        path = tmp_path / "f.txt"
        run(capsys, "build", "--alpha", "1", "--lambda", "1", "--d", "1", "--m", "1",
            "--p", "0", "--sample", "0.00390625", "--out", str(path))
        code, out, _ = run(capsys, "certify", "--alpha", "1", "--lambda", "1",
                           "--d", "1", "--m", "1", "--p", "0", "--eps", "0.0078125",
                           "--h", str(path))
        assert code == 0
        assert "mode=empirical" in out
        assert "certified_count=2" in out

    def test_chart_flag_and_csv(self, capsys, tmp_path):
        csv_path = tmp_path / "cert.csv"
        code, out, _ = run(capsys, "certify", "--alpha", "1", "--lambda", "1",
                           "--d", "1", "--m", "1", "--p", "0", "--eps", "0.0078125",
                           "--chart", "identity", "--csv", str(csv_path))
        assert code == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0].startswith("eps,")
        assert len(lines) == 2

    def test_affine_chart_spec(self, capsys):
        code, out, _ = run(capsys, "certify", "--alpha", "1", "--lambda", "1",
                           "--d", "1", "--m", "1", "--p", "0", "--eps", "0.0078125",
                           "--chart", "affine:2,0")
        assert code == 0
        assert "n0=1" in out

    def test_unknown_chart_is_clean_error(self, capsys):
        code, _, err = run(capsys, "certify", "--alpha", "1", "--lambda", "1",
                           "--d", "1", "--m", "1", "--p", "0", "--eps", "0.0078125",
                           "--chart", "mystery")
        assert code == 2
        assert "error:" in err


class TestPerturbCommand:
    def test_flatten_writes_function(self, capsys, tmp_path):
        out_path = tmp_path / "h.txt"
        code, out, _ = run(capsys, "perturb", "--mode", "flatten", "--eps", "0.0078125",
                           "--C", "0.25", "--out", str(out_path))
        assert code == 0
        h = SampledFunction.load(out_path)
        assert h.d == 1 and h.m == 1

    def test_refine_reports_zero_count(self, capsys, tmp_path):
        out_path = tmp_path / "h.txt"
        code, out, _ = run(capsys, "perturb", "--mode", "refine", "--eps", "0.0078125",
                           "--C", "0.25", "--out", str(out_path))
        assert code == 0
        assert "zero components" in out

    def test_iterate_prints_rounds(self, capsys):
        code, out, _ = run(capsys, "perturb", "--mode", "iterate", "--eps", "0.015625",
                           "--C", "0.5", "--rounds", "2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "k eps zero_count envelope"
        assert len(lines) == 3

    def test_missing_out_is_clean_error(self, capsys):
        code, _, err = run(capsys, "perturb", "--mode", "flatten", "--eps", "0.0078125")
        assert code == 2 and "needs --out" in err

    def test_function_file_input(self, capsys, tmp_path):
        fpath = tmp_path / "f.txt"
        run(capsys, "build", "--alpha", "1", "--lambda", "1", "--d", "1", "--m", "1",
            "--p", "0", "--sample", "0.0078125", "--out", str(fpath))
        out_path = tmp_path / "h.txt"
        code, _, _ = run(capsys, "perturb", "--mode", "refine", "--eps", "0.015625",
                         "--func", str(fpath), "--out", str(out_path))
        assert code == 0 and out_path.exists()


class TestSweepCommand:
    def test_writes_csv(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("alpha=1\nlambda=1\nd=1\nm=1\np=0\nj_min=6\nj_max=9\n")
        out_path = tmp_path / "sweep.csv"
        code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0].startswith("eps,n0,")
        assert len(lines) == 5

    def test_chart_flag(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("alpha=1\nlambda=1\nd=1\nm=1\np=0\nj_min=6\nj_max=7\n")
        out_path = tmp_path / "sweep.csv"
        code, _, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(out_path),
                         "--chart", "identity")
        assert code == 0
        assert len(out_path.read_text().splitlines()) == 3

    def test_bad_config_is_clean_error(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("alpha=1\nwidget=2\n")
        out_path = tmp_path / "sweep.csv"
        code, _, err = run(capsys, "sweep", "--config", str(cfg), "--out", str(out_path))
        assert code == 2 and "unknown key" in err

    def test_missing_file_is_clean_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "sweep", "--config", str(tmp_path / "nope.txt"),
                           "--out", str(tmp_path / "o.csv"))
        assert code == 2 and "error:" in err
