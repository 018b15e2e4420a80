import csv
import io
import json
import math
import subprocess
import sys

import pytest

from gapdet.cli import InputError, parse_complex, parse_grid, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    doc = json.loads(text)
    assert doc["schema_version"] == 1
    return doc["records"]


def csv_rows(text):
    first, rest = text.split("\n", 1)
    assert first.startswith("# gapdet-csv schema_version=1")
    return list(csv.DictReader(io.StringIO(rest)))


class TestParsing:
    @pytest.mark.parametrize(
        "text,val",
        [("0.3", 0.3), ("0.2i", 0.2j), ("-1.5-0.25i", -1.5 - 0.25j), ("1e-3+2i", 1e-3 + 2j), ("i", 1j), ("-i", -1j)],
    )
    def test_complex(self, text, val):
        assert parse_complex(text) == val

    @pytest.mark.parametrize("text", ["", "abc", "1+2j+3"])
    def test_bad_complex(self, text):
        with pytest.raises(Exception):
            parse_complex(text)

    def test_grid(self):
        assert parse_grid("3:6:1") == [3.0, 4.0, 5.0, 6.0]
        assert parse_grid("128,256,512", integer=True) == [128, 256, 512]
        assert parse_grid("0.5:1:0.25") == [0.5, 0.75, 1.0]

    @pytest.mark.parametrize("text", ["5:1:1", "1:2:0", "1:2", ""])
    def test_bad_grid(self, text):
        with pytest.raises(InputError):
            parse_grid(text)


class TestCommands:
    def test_det(self, capsys):
        code, out, _ = call(capsys, "det", "--kernel", "sine", "--s", "6", "--tol", "1e-10")
        assert code == 0
        (rec,) = records(out)
        assert {"det", "ln_det", "m_final", "err_estimate"} <= set(rec)
        assert rec["ln_det"]["re"] == pytest.approx(-18 - 0.25 * math.log(6) - 0.43850117, abs=0.1 / 6)

    def test_compare_csv(self, capsys):
        code, out, _ = call(
            capsys, "compare", "--kernel", "chf", "--alpha", "0.3", "--beta", "0.2i", "--s-grid", "3:12:1", "--out", "csv"
        )
        assert code == 0
        rows = csv_rows(out)
        assert [float(r["s"]) for r in rows] == list(range(3, 13))
        sr = [float(r["residual_times_s"]) for r in rows[3:]]
        assert max(sr) <= 2 * min(sr)

    def test_scaling(self, capsys):
        code, out, _ = call(capsys, "scaling", "--mode", "toeplitz", "--alpha", "0", "--beta", "0", "--s", "2", "--n-grid", "32,64,128")
        assert code == 0
        dev = [r["deviation"] for r in records(out)]
        assert dev[0] > dev[1] > dev[2]

    def test_scaling_hankel(self, capsys):
        code, out, _ = call(capsys, "scaling", "--mode", "hankel", "--alpha", "0.5", "--s", "1", "--n-grid", "16,32")
        assert code == 0
        recs = records(out)
        assert recs[0]["s"] == 1.0
        assert recs[1]["deviation"] < recs[0]["deviation"]

    def test_asym(self, capsys):
        code, out, _ = call(capsys, "asym", "--kernel", "bessel2", "--a", "0", "--s", "40")
        assert code == 0
        assert records(out)[0]["ln_asym"]["re"] == pytest.approx(-10.0)

    def test_toeplitz_hankel_selberg_diffid(self, capsys):
        assert call(capsys, "toeplitz", "--alpha", "0.3", "--beta", "0.2i", "--phi", "0.5", "--n", "32")[0] == 0
        code, out, _ = call(capsys, "hankel", "--alpha", "0", "--phi", "0", "--n", "8")
        assert code == 0 and records(out)[0]["difference"] < 1e-10
        code, out, _ = call(capsys, "selberg", "--n-grid", "10,20,40")
        assert code == 0 and records(out)[1]["difference"] <= 0.01
        code, out, _ = call(capsys, "selberg", "--alpha", "0.5", "--eps", "0.05", "--n", "2")
        assert code == 0 and records(out)[0]["relative_error"] < 0.05
        code, out, _ = call(capsys, "diffid", "--alpha", "0.3", "--n", "64", "--phi", "1.5")
        assert code == 0 and {"fd", "fd_richardson", "rhs", "bound"} <= set(records(out)[0])

    def test_output_and_plot_data(self, capsys, tmp_path):
        out_path, plot_path = tmp_path / "r.json", tmp_path / "p.dat"
        code, out, _ = call(
            capsys, "det", "--s-grid", "1:3:1", "--output", str(out_path), "--emit-plot-data", str(plot_path)
        )
        assert code == 0 and out == ""
        assert len(records(out_path.read_text())) == 3
        lines = plot_path.read_text().splitlines()
        assert lines[0].startswith("# s ") and len(lines) == 4

    def test_parallel_order(self, capsys):
        args = ["compare", "--kernel", "bessel1", "--alpha", "0.5", "--s-grid", "1:6:1", "--out", "csv"]
        _, serial, _ = call(capsys, *args)
        _, parallel, _ = call(capsys, *args, "--jobs", "3")
        strip = lambda t: [{k: v for k, v in r.items() if k != "wall_s"} for r in csv_rows(t)]  # noqa: E731
        assert strip(serial) == strip(parallel)


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["det", "--kernel", "chf", "--alpha", "-0.6", "--s", "2"],
            ["asym", "--kernel", "chf", "--alpha", "0.3", "--beta", "1.32", "--s", "2"],
            ["det", "--s", "-1"],
            ["det", "--s", "1", "--tol", "0"],
            ["det", "--s-grid", "5:1:1"],
            ["det"],
            ["scaling", "--s", "10", "--n", "4"],
        ],
    )
    def test_invalid(self, capsys, argv):
        assert call(capsys, *argv)[0] == 2

    def test_nonconvergence(self, capsys):
        code, out, err = call(capsys, "det", "--s", "12", "--tol", "1e-14")
        assert code == 3
        assert records(out)[0]["converged"] is False
        assert "nonconvergence" in err

    def test_module_entry(self):
        p = subprocess.run([sys.executable, "-m", "gapdet", "--version"], capture_output=True, text=True)
        assert p.returncode == 0 and p.stdout.startswith("gapdet ")
