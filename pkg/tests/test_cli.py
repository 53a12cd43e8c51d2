import csv
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from polysemy.cli import main, parse_spectrum
from polysemy.errors import ParseError
from polysemy.model import DictionaryTotals, meanings_total, predicted_spectrum, solve_parameters
from polysemy.simulate import SimConfig, sample_spectrum

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report.schema.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return report


def write_spectrum(path, counts):
    path.write_text("".join(f"{k},{n}\n" for k, n in sorted(counts.items())))
    return path


def planted_counts(n_words, gamma=1.0):
    fit = solve_parameters(DictionaryTotals(n_words, meanings_total(n_words, gamma)))
    return {k: round(n) for k, n in predicted_spectrum(fit).counts.items() if round(n) > 0}


class TestParse:
    def test_csv(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("1,100\n2,40\n3,10")
        s = parse_spectrum(p)
        assert dict(s.counts) == {1: 100, 2: 40, 3: 10}
        assert (s.total_words(), s.total_meanings()) == (150, 210)

    def test_tab_with_header(self, tmp_path):
        p = tmp_path / "s.tsv"
        p.write_text("k\tcount\n1\t5\n")
        assert dict(parse_spectrum(p).counts) == {1: 5}

    def test_semicolon_and_blank_lines(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("degree;words\n\n1; 7\n2;3\n\n")
        assert dict(parse_spectrum(p).counts) == {1: 7, 2: 3}

    def test_json(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text('{"spectrum": {"1": 100, "2": 40}}')
        assert dict(parse_spectrum(p).counts) == {1: 100, 2: 40}

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("1,100\n1,50", "line 2: duplicate degree 1"),
            ("1,100\n2,x\n", "line 2"),
            ("1,100\n2,4,5\n", "line 2: expected 2 fields"),
            ("1,100\n0,4\n", "line 2: degree must be >= 1"),
            ("1,-3\n", "count must be >= 0"),
            ("", "empty"),
            ("1,0\n2,0\n", "positive count"),
            ('{"spectrum": {"1": 4, "1": 5}}', "duplicate degree"),
            ('{"spectrum": {"1": 4.5}}', "integer"),
            ('{"words": 3}', "JSON spectrum files"),
        ],
    )
    def test_errors(self, tmp_path, text, fragment):
        p = tmp_path / "bad.csv"
        p.write_text(text)
        with pytest.raises(ParseError, match=fragment):
            parse_spectrum(p)


class TestPredict:
    def test_round_trip(self, capsys):
        m = meanings_total(1000, 1.0)
        report = run_json(capsys, "predict", "--words", 1000, "--meanings", repr(m))
        assert report["fit"]["gamma"] == pytest.approx(1.0, abs=1e-8)
        fit = solve_parameters(DictionaryTotals(1000, m))
        # numbers survive the JSON round trip bit for bit
        assert report["fit"]["gamma"] == fit.gamma
        assert report["fit"]["k_const"] == fit.k_const
        expected = predicted_spectrum(fit)
        assert [r["expected"] for r in report["spectrum"]] == [expected.counts[k] for k in sorted(expected.counts)]

    def test_infeasible(self, capsys):
        code, out, err = run(capsys, "predict", "--words", 100, "--meanings", 90)
        assert code == 4
        assert out == ""
        assert "M > L" in err

    def test_csv(self, capsys, tmp_path):
        path = tmp_path / "n.csv"
        report = run_json(capsys, "predict", "--words", 200, "--meanings", 450, "--k-max", 12, "--emit-csv", path)
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["k", "expected"]
        assert len(rows) == 13
        assert float(rows[1][1]) == report["spectrum"][0]["expected"]

    def test_pretty(self, capsys):
        code, out, _ = run(capsys, "predict", "--words", 200, "--meanings", 450, "--pretty")
        assert code == 0
        assert "gamma =" in out and "expected" in out


class TestTest:
    def test_sampled_spectrum_accepted(self, capsys, tmp_path):
        fit = solve_parameters(DictionaryTotals(3000, meanings_total(3000, 1.0)))
        sample = sample_spectrum(SimConfig(17, 1, fit))[0]
        path = write_spectrum(tmp_path / "s.csv", dict(sample.counts))
        report = run_json(capsys, "test", path)
        assert report["gof"]["p_value"] > 0.05
        assert report["gof"]["policy"]["min_class_size"] == 10
        assert report["gof"]["dof"] == len(report["gof"]["classes"]) - 1

    def test_join(self, capsys, tmp_path):
        path = write_spectrum(tmp_path / "s.csv", planted_counts(20000))
        report = run_json(capsys, "test", path, "--join", "8,9")
        assert [8, 9] in [c["degrees"] for c in report["gof"]["classes"]]
        assert report["gof"]["policy"]["explicit_joins"] == [[8, 9]]

    def test_bad_fit_still_exits_zero(self, capsys, tmp_path):
        counts = planted_counts(5000)
        counts[2] *= 5
        report = run_json(capsys, "test", write_spectrum(tmp_path / "s.csv", counts))
        assert report["gof"]["p_value"] < 1e-6

    def test_parse_error_status(self, capsys, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("1,100\n1,50\n")
        code, _, err = run(capsys, "test", path)
        assert code == 3
        assert "line 2" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "test", tmp_path / "nope.csv")
        assert code == 3

    def test_infeasible_spectrum(self, capsys, tmp_path):
        code, _, _ = run(capsys, "test", write_spectrum(tmp_path / "s.csv", {1: 50}))
        assert code == 4

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["test"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestFitLstar:
    def test_planted_recovery(self, capsys, tmp_path):
        counts = planted_counts(20000)
        full = sum(counts.values())
        counts[1] -= 2000
        report = run_json(capsys, "fit-lstar", write_spectrum(tmp_path / "s.csv", counts))
        assert abs(report["lstar"]["l_star"] - full) <= 0.05 * full
        assert report["gof"]["fitted_param_count"] == 1
        ls = report["lstar"]
        assert ls["modified_totals"]["meanings"] - ls["observed_totals"]["meanings"] == ls["l_star"] - ls["observed_totals"]["words"]

    def test_exclude_above(self, capsys, tmp_path):
        counts = planted_counts(20000, 1.2)
        counts[1] -= 2000
        report = run_json(
            capsys, "fit-lstar", write_spectrum(tmp_path / "s.csv", counts), "--exclude-k-above", 14
        )
        assert report["gof"]["policy"]["exclude_above"] == 14
        assert max(max(c["degrees"]) for c in report["gof"]["classes"]) == 14
        assert report["lstar"]["observed_totals"]["words"] == sum(n for k, n in counts.items() if k <= 14)

    def test_empty_range(self, capsys, tmp_path):
        path = write_spectrum(tmp_path / "s.csv", planted_counts(3000))
        code, _, err = run(capsys, "fit-lstar", path, "--search-lo", 4000, "--search-hi", 4000)
        assert code == 2
        assert "search range" in err


class TestSimulate:
    def test_identical_bytes(self):
        cmd = [sys.executable, "-m", "polysemy", "simulate", "--words", "500", "--gamma", "1",
               "--seed", "42", "--reps", "2"]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b and a

    def test_calibrate(self, capsys):
        report = run_json(capsys, "simulate", "--words", 800, "--gamma", 1, "--reps", 5, "--calibrate")
        ps = report["simulation"]["p_values"]
        assert len(ps) == 5 and all(0 <= p <= 1 for p in ps)

    def test_tracks_predict(self, capsys):
        sim = run_json(capsys, "simulate", "--words", 500, "--gamma", 1, "--seed", 9, "--reps", 1000)
        pred = run_json(capsys, "predict", "--words", 500, "--meanings", repr(sim["totals"]["meanings"]))
        expected = {r["k"]: r["expected"] for r in pred["spectrum"]}
        for row in sim["simulation"]["degrees"]:
            if expected.get(row["k"], 0) >= 1:
                assert abs(row["mean"] - expected[row["k"]]) <= 3 * row["se"]

    def test_needs_one_source(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--words", "100"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_single_replicate_has_null_se(self, capsys):
        report = run_json(capsys, "simulate", "--words", 100, "--meanings", 160, "--reps", 1)
        assert all(row["se"] is None for row in report["simulation"]["degrees"])

    def test_negative_seed(self, capsys):
        code, _, _ = run(capsys, "simulate", "--words", 100, "--gamma", 1, "--seed", -1)
        assert code == 2


def test_commands_are_deterministic(capsys, tmp_path):
    path = write_spectrum(tmp_path / "s.csv", planted_counts(4000))
    for argv in (["predict", "--words", 400, "--meanings", 900], ["test", path], ["fit-lstar", path]):
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first
