import json

import pytest

from fraceq.cli import (EXIT_CHECK_FAILED, EXIT_IO, EXIT_NUMERICAL, EXIT_OK,
                        EXIT_USAGE, main, parse_args)

EXP1 = '{"kind":"exponential","params":{"lambda":1}}'
EXP_MEAN2 = '{"kind":"exponential","params":{"lambda":0.5}}'
WEIBULL = '{"kind":"weibull","params":{"k":2,"lambda":1}}'
G_LINEAR = '[{"coef":1,"exp":1}]'
G_SQUARE = '[{"coef":1,"exp":2}]'


def report_of(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


class TestParse:
    def test_eqdist_config(self):
        cfg = parse_args(["eqdist", "--dist", EXP1, "--alpha", "0.5", "--n", "2"])
        assert cfg.command == "eqdist"
        assert cfg.dist.kind == "exponential"
        assert cfg.alphas == [0.5]
        assert cfg.ns == [2]

    def test_comma_lists(self):
        cfg = parse_args(["eqdist", "--dist", EXP1, "--alpha", "0.5,1", "--n", "1,2"])
        assert cfg.alphas == [0.5, 1.0]
        assert cfg.ns == [1, 2]

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            parse_args(["frobnicate"])
        assert exc.value.code == EXIT_USAGE

    def test_malformed_json_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            parse_args(["eqdist", "--dist", '{"kind": oops}'])
        assert exc.value.code == EXIT_USAGE

    def test_grid_minimum(self):
        with pytest.raises(SystemExit) as exc:
            parse_args(["order", "--dist-x", EXP1, "--dist-y", EXP_MEAN2,
                        "--grid", "4"])
        assert exc.value.code == EXIT_USAGE

    def test_suite_config(self):
        assert parse_args(["suite"]).command == "suite"


class TestRun:
    def test_eqdist_report(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["eqdist", "--dist", EXP1, "--alpha", "0.5,1", "--n", "1",
                     "--grid", "8", "--out", str(out)])
        assert code == EXIT_OK
        doc = report_of(out)
        assert doc["header"]["config"]["command"] == "eqdist"
        assert {"check", "lhs", "rhs", "residual", "tolerance", "pass",
                "params"} <= set(doc["results"][0])
        assert all(row["pass"] for row in doc["results"])

    def test_characterize_weibull_negative_is_pass(self, tmp_path):
        out = tmp_path / "char.json"
        code = main(["characterize", "--dist", WEIBULL, "--alpha", "1",
                     "--n", "1", "--out", str(out)])
        assert code == EXIT_OK
        doc = report_of(out)
        summary = [r for r in doc["results"]
                   if r["check"] == "characterization_summary"][0]
        assert summary["params"]["is_fixed_point"] is False

    def test_order_informational(self, tmp_path):
        out = tmp_path / "order.json"
        code = main(["order", "--dist-x", EXP1, "--dist-y", EXP_MEAN2,
                     "--alpha", "0.5", "--out", str(out)])
        assert code == EXIT_OK
        row = report_of(out)["results"][0]
        assert row["params"]["holds"] is False
        assert row["params"]["worst_t"] == 0.0

    def test_taylor_command(self, tmp_path):
        out = tmp_path / "taylor.json"
        code = main(["taylor", "--dist", EXP1, "--g", G_SQUARE,
                     "--alpha", "0.5,1", "--n", "0,1", "--out", str(out)])
        assert code == EXIT_OK

    def test_mvt_command(self, tmp_path):
        out = tmp_path / "mvt.json"
        code = main(["mvt", "--dist-x", EXP1, "--dist-y", EXP_MEAN2,
                     "--g", G_SQUARE, "--alpha", "1", "--out", str(out)])
        assert code == EXIT_OK
        row = report_of(out)["results"][0]
        assert abs(row["lhs"] - 6.0) < 1e-9

    def test_actuarial_command_with_ratio(self, tmp_path):
        out = tmp_path / "act.json"
        code = main(["actuarial", "--severity", EXP1, "--r", "0.5", "--s", "1",
                     "--u", "1", "--v", "2", "--g", G_LINEAR, "--g", G_SQUARE,
                     "--alpha", "1", "--out", str(out)])
        assert code == EXIT_OK
        checks = {r["check"] for r in report_of(out)["results"]}
        assert checks == {"deductible_mvt", "exponential_ratio_check"}

    def test_check_failure_exits_1(self, tmp_path):
        # an impossible tolerance turns a healthy residual into a failure
        out = tmp_path / "fail.json"
        code = main(["mvt", "--dist-x", EXP1, "--dist-y", EXP_MEAN2,
                     "--g", G_SQUARE, "--alpha", "1", "--tol", "1e-30",
                     "--out", str(out)])
        assert code == EXIT_CHECK_FAILED
        assert report_of(out)["results"][0]["pass"] is False

    def test_divergence_exits_3(self, tmp_path):
        zi = '{"kind":"zero_inflated","params":{"p":0.3},"inner":' + EXP1 + '}'
        g = '[{"coef":1,"exp":-0.5}]'
        code = main(["mvt", "--dist-x", zi, "--dist-y", EXP1, "--g", g,
                     "--alpha", "0.5", "--allow-unordered",
                     "--out", str(tmp_path / "x.json")])
        assert code == EXIT_NUMERICAL

    def test_io_error_exits_4(self, tmp_path):
        code = main(["order", "--dist-x", EXP1, "--dist-y", EXP_MEAN2,
                     "--out", str(tmp_path / "no" / "such" / "dir.json")])
        assert code == EXIT_IO

    def test_reports_are_deterministic(self, tmp_path):
        args = ["eqdist", "--dist", EXP1, "--alpha", "0.5", "--n", "1",
                "--grid", "8"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(args + ["--out", str(a)]) == EXIT_OK
        assert main(args + ["--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_csv_grid_files(self, tmp_path):
        out = tmp_path / "grid.csv"
        code = main(["eqdist", "--dist", EXP1, "--alpha", "0.5", "--n", "1",
                     "--grid", "8", "--format", "csv", "--out", str(out)])
        assert code == EXIT_OK
        grid_file = tmp_path / "grid_alpha0.5_n1.csv"
        assert grid_file.exists()
        lines = grid_file.read_text().splitlines()
        assert lines[0] == "t,value,oracle_value,abs_diff"
        assert len(lines) == 9

    def test_stdout_when_no_out(self, capsys):
        code = main(["order", "--dist-x", EXP1, "--dist-y", EXP_MEAN2,
                     "--alpha", "1"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["header"]["version"]

    def test_suite_exits_zero(self, tmp_path):
        out = tmp_path / "suite.json"
        code = main(["suite", "--out", str(out)])
        assert code == EXIT_OK
        doc = report_of(out)
        assert all(row["pass"] for row in doc["results"])
        criteria = {row["params"]["criterion"] for row in doc["results"]}
        assert criteria == set(range(1, 14))
