import csv
import io
import json
import subprocess
import sys

import pytest

from coopic import rates
from coopic.cli import main
from coopic.ldc import FIXTURE_DIR


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_rates_row(capsys):
    code, out, _ = run(capsys, "rates", "--snr-db", "20", "--inr-db", "10", "--cb", "1", "--phases", "0,0,0,0")
    assert code == 0
    (row,) = rows(out)
    assert float(row["r_sym"]) == pytest.approx(3.392, abs=1e-3)
    assert float(row["c_bar"]) == pytest.approx(5.328, abs=1e-3)
    assert float(row["gap"]) == pytest.approx(1.936, abs=1e-3)
    assert row["r_binding"] == "private+interf" and row["c_binding"] == "z-channel"


def test_rates_without_cooperation_in_contract(capsys):
    _, out, _ = run(capsys, "rates", "--snr-db", "20", "--inr-db", "10", "--cb", "0", "--phases", "0,0,0,0")
    (row,) = rows(out)
    assert 0 <= float(row["gap"]) <= 3


def test_rates_json_and_phase_seed(capsys):
    _, out, _ = run(capsys, "rates", "--snr-db", "30", "--inr-db", "40", "--phase-seed", "5",
                    "--phase-samples", "3", "--format", "json")
    data = json.loads(out)
    assert len(data) == 3 and all(0 <= r["gap"] <= 3 for r in data)


def test_missing_required_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["rates", "--snr-db", "20"])
    assert e.value.code == 2
    assert "--inr-db" in capsys.readouterr().err


@pytest.mark.parametrize("bad", [["--phases", "0,0,0"], ["--phases", "0,nan,0,0"], ["--cb", "-1"]])
def test_rates_bad_values(capsys, bad):
    with pytest.raises(SystemExit) as e:
        main(["rates", "--snr-db", "20", "--inr-db", "10", *bad])
    assert e.value.code == 2


def test_single_point_sweep_matches_rates(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, summary, _ = run(capsys, "gap-sweep", "--snr-db", "20", "--inr-db", "10", "--cb", "1",
                           "--phase-samples", "0", "--out", str(out_csv))
    assert code == 0
    assert json.loads(summary)["contract_ok"]
    sweep_rows = rows(out_csv.read_text())
    assert len(sweep_rows) == 2  # the two extreme phase tuples
    _, out, _ = run(capsys, "rates", "--snr-db", "20", "--inr-db", "10", "--cb", "1", "--phases", "0,0,0,0")
    (single,) = rows(out)
    assert sweep_rows[0] == single


def test_sweep_alpha_kappa_grid(capsys, tmp_path):
    out_csv = tmp_path / "s.csv"
    code, summary, _ = run(capsys, "gap-sweep", "--snr-db", "20,40", "--alpha", "1/2,2", "--kappa", "0,1/4",
                           "--phase-samples", "2", "--out", str(out_csv))
    assert code == 0
    data = rows(out_csv.read_text())
    assert len(data) == 2 * 2 * 2 * 4
    assert {float(r["inr_db"]) for r in data} == {10.0, 20.0, 40.0, 80.0}


def test_corrupted_bound_fails_contract(capsys, monkeypatch):
    real = rates.outer_bound_sym

    def inflated(gains, cb):
        b = real(gains, cb)
        return rates.RateBreakdown(tuple((k, v + 5.0) for k, v in b.terms))

    monkeypatch.setattr(rates, "outer_bound_sym", inflated)
    code, out, err = run(capsys, "gap-sweep", "--snr-db", "20", "--inr-db", "10", "--cb", "1", "--phase-samples", "1")
    assert code != 0
    assert json.loads(out)["violation_count"] == 3
    assert "violated" in err


def test_gdof_csv(capsys):
    code, out, _ = run(capsys, "gdof", "--alpha", "0.6667", "--kappa", "0.3333")
    assert code == 0
    (row,) = rows(out)
    assert float(row["d"]) == pytest.approx(5 / 6, abs=1e-4)


def test_gdof_kink(capsys):
    _, out, _ = run(capsys, "gdof", "--alpha", "1/2", "--kappa", "0.4,0.5,0.6")
    ds = [float(r["d"]) for r in rows(out)]
    assert ds[1] - ds[0] == pytest.approx(0.1) and ds[2] == ds[1]
    assert {float(r["kappa_star"]) for r in rows(out)} == {0.5}


def test_gdof_unit_alpha_caveat(capsys):
    _, out, _ = run(capsys, "gdof", "--alpha", "1", "--kappa", "0,1/2")
    assert all(r["phase_caveat"] == "1" for r in rows(out))


def test_gdof_numeric_and_plot(capsys, tmp_path):
    code, out, _ = run(capsys, "gdof", "--alpha", "1/2", "--kappa", "1/4", "--numeric", "60,120",
                       "--phase-samples", "8", "--plot-dir", str(tmp_path), "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [d["snr_db"] for d in data] == [60.0, 120.0]
    assert all(d["r_lo"] <= d["r_hi"] for d in data)
    assert (tmp_path / "gdof_alpha_0.5.dat").read_text().split() == ["0.25", "0.75"]


def test_ldc_run(capsys):
    code, out, _ = run(capsys, "ldc", "run", "fig2_optimal.json", "--trials", "2000")
    data = json.loads(out)
    assert code == 0 and data["sum_rate"] == 5 and data["decode_errors"] == [0, 0] and data["matches_expected"]


def test_ldc_run_detects_mismatch(capsys, tmp_path):
    raw = json.loads((FIXTURE_DIR / "fig2_optimal.json").read_text())
    raw["expected"]["sum_rate"] = 6
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "ldc", "run", str(path), "--trials", "100")
    assert code == 1 and not json.loads(out)["matches_expected"]


def test_ldc_search(capsys):
    code, out, _ = run(capsys, "ldc", "search", "--n", "3", "--m", "2", "--k", "1")
    data = json.loads(out)
    assert code == 0
    assert data["best_sum"] == 5 and data["best_sym_exact"] == "5/2" and data["formula_sym"] == 2.5


def test_ldc_search_guard_is_usage_error(capsys):
    code, _, err = run(capsys, "ldc", "search", "--n", "6", "--m", "2", "--k", "1")
    assert code == 2 and "too large" in err


def test_ldc_scenario(capsys):
    code, out, _ = run(capsys, "ldc", "scenario", "--config", "fig5_scenario.json")
    data = json.loads(out)
    assert code == 0
    assert (data["one_round_quantize"], data["decode_forward"], data["r2"]) == (2, 3, 1)


def test_workers_do_not_change_output(tmp_path, capsys):
    args = ["gap-sweep", "--snr-db", "10:30:10", "--inr-db", "15,35", "--cb", "0,2", "--phase-samples", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, *args, "--out", str(a))
    run(capsys, *args, "--workers", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_output_has_no_nan(capsys, tmp_path):
    out_csv = tmp_path / "s.csv"
    run(capsys, "gap-sweep", "--snr-db", "5:70:65", "--inr-db", "5:70:65", "--cb", "0,10", "--out", str(out_csv))
    text = out_csv.read_text().lower()
    assert "nan" not in text and "inf" not in text


def _subprocess_bytes(args):
    return subprocess.run([sys.executable, "-m", "coopic", *args], check=True, capture_output=True).stdout


@pytest.mark.parametrize("args", [
    ["rates", "--snr-db", "25", "--inr-db", "35", "--phase-seed", "9", "--phase-samples", "4"],
    ["gap-sweep", "--snr-db", "10,20", "--inr-db", "30", "--cb", "1", "--phase-samples", "2"],
    ["gdof", "--alpha", "2/3", "--kappa", "0:1:1/4", "--numeric", "40", "--phase-samples", "4"],
    ["ldc", "search", "--n", "4", "--m", "2", "--k", "1"],
])
def test_byte_determinism(args):
    assert _subprocess_bytes(args) == _subprocess_bytes(args)
