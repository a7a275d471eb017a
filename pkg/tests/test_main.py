"""Tests for the command-line surface."""

import json

import pytest

from src.main import build_parser, main, parse_h_range
from src.utils.errors import ValidationError


def run_cli(argv, tmp_path):
    """Run main with an isolated cache and no log file; returns (exit code, report or None)."""
    output = tmp_path / "report.json"
    argv = argv + ["--cache-dir", str(tmp_path / "cache"), "--log-file", "", "--log-level", "WARNING",
                   "--output", str(output)]
    with pytest.raises(SystemExit) as exit_info:
        main(argv)
    report = json.loads(output.read_text(encoding="utf-8")) if output.exists() else None
    return exit_info.value.code, report


class TestParseHRange:
    @pytest.mark.parametrize("text,expected", [
        ("4", [4]),
        ("2..6", [2, 3, 4, 5, 6]),
        ("3,5,6", [3, 5, 6]),
        (" 3..3 ", [3]),
    ])
    def test_forms(self, text, expected):
        assert parse_h_range(text) == expected

    @pytest.mark.parametrize("text", ["6..2", "two", "2..", "3;4", ""])
    def test_rejected_with_flag_name(self, text):
        with pytest.raises(ValidationError, match="--h"):
            parse_h_range(text)


class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_flags_after_subcommand(self):
        args = build_parser().parse_args(["moment", "--form", "level11", "--p", "3", "--h", "2..6",
                                          "--l1", "1", "--l2", "1", "--threads", "2"])
        assert args.subcommand == "moment"
        assert args.h == "2..6" and args.l1 == 1 and args.threads == 2
        assert args.method == "orbit"

    def test_bad_format_choice(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["characters", "--format", "xml"])


class TestMain:
    def test_characters_list_wild(self, tmp_path):
        code, report = run_cli(["characters", "--p", "3", "--h", "3", "--list-wild"], tmp_path)
        assert code == 0
        assert report["subcommand"] == "characters"
        assert report["result"]["wild_indices"] == [2, 4, 8, 10, 14, 16]
        assert all(abs(row["gauss_modulus_ratio"] - 1.0) < 1e-9 for row in report["result"]["rows"])

    def test_reports_are_byte_identical(self, tmp_path):
        first = tmp_path / "a"
        second = tmp_path / "b"
        first.mkdir()
        second.mkdir()
        run_cli(["lattice", "--p", "5", "--h", "3", "--samples", "20", "--max-side", "40", "--seed", "3"], first)
        run_cli(["lattice", "--p", "5", "--h", "3", "--samples", "20", "--max-side", "40", "--seed", "3"], second)
        assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()

    def test_lattice_report(self, tmp_path):
        code, report = run_cli(["lattice", "--p", "5", "--h", "4", "--samples", "30", "--max-side", "60"],
                               tmp_path)
        assert code == 0
        result = report["result"]
        assert result["shortest_vector_violations"] == []
        assert len(result["rows"]) == 30
        assert result["box_count"]["max_ratio"] <= 10

    def test_invalid_prime_exits_one(self, tmp_path):
        code, report = run_cli(["characters", "--p", "9", "--h", "2"], tmp_path)
        assert code == 1
        assert report is None

    def test_bad_h_exits_one(self, tmp_path):
        code, _ = run_cli(["lvalue", "--h", "6..2"], tmp_path)
        assert code == 1

    def test_missing_explicit_config_exits_one(self, tmp_path):
        code, _ = run_cli(["characters", "--config", str(tmp_path / "absent.yaml")], tmp_path)
        assert code == 1

    def test_insufficient_coefficients_exits_one(self, tmp_path):
        code, _ = run_cli(["lvalue", "--form", "level11", "--N", "50", "--p", "3", "--h", "4"], tmp_path)
        assert code == 1

    def test_recognize_value(self, tmp_path):
        code, report = run_cli(["recognize", "--value", "2.5320888862379560704047853011108",
                                "--m", "9", "--height-bound", "100"], tmp_path)
        assert code == 0
        assert report["result"]["status"] == "recognized"
        assert report["result"]["coefficients"] == [1, 1, 0]

    def test_lvalue_csv(self, tmp_path):
        output = tmp_path / "report.csv"
        with pytest.raises(SystemExit) as exit_info:
            main(["lvalue", "--form", "level11", "--p", "3", "--h", "2", "--N", "5000", "--format", "csv",
                  "--cache-dir", str(tmp_path / "cache"), "--log-file", "", "--output", str(output)])
        code = exit_info.value.code
        assert code == 0
        lines = output.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        assert "value.re" in lines[0]

    @pytest.mark.slow
    def test_selftest_subset(self, tmp_path):
        code, report = run_cli(["selftest", "--only", "galois_average_exact,recognition_round_trip"], tmp_path)
        assert code == 0
        assert [row["name"] for row in report["result"]["rows"]] == [
            "galois_average_exact", "recognition_round_trip"]

    def test_selftest_unknown_check(self, tmp_path):
        code, _ = run_cli(["selftest", "--only", "no_such_check", "--N", "20000"], tmp_path)
        assert code == 1
