import json
import math

import numpy as np
import pytest

from conftest import levenshtein_recursive
from vlcsync.channel import Awgn
from vlcsync.cli import main
from vlcsync.codes import hard_decode
from vlcsync.experiments import (
    ExperimentConfig,
    frame_rng,
    run_cost_comparison,
    run_criteria_table,
    run_entropy_convergence,
    run_fer_sweep,
    sample_frame,
)
from vlcsync.metrics import bit_error_fraction, levenshtein, nld
from vlcsync.reporting import Report, fmt_value
from vlcsync.tables import get_code
from vlcsync.trellis import BIT_SYMBOL


def test_levenshtein_basics():
    assert levenshtein(["a1", "a2"], ["a1", "a2"]) == 0
    assert levenshtein(["a1", "a2", "a3"], ["a1", "a3"]) == 1
    assert levenshtein([], ["x", "y"]) == 2
    assert levenshtein("kitten", "sitting") == 3
    assert nld(["a1"], ["a1", "a2"], 2) == 0.5


def test_levenshtein_against_recursive_oracle():
    rng = np.random.default_rng(5)
    for _ in range(60):
        a = [int(x) for x in rng.integers(0, 3, size=rng.integers(0, 8))]
        b = [int(x) for x in rng.integers(0, 3, size=rng.integers(0, 8))]
        assert levenshtein(a, b) == levenshtein_recursive(a, b)


def test_bit_error_fraction():
    assert bit_error_fraction(np.array([0, 1, 1]), np.array([0, 1, 0])) == \
        pytest.approx(1 / 3)
    assert bit_error_fraction(np.array([0, 1]), np.array([0, 1, 0, 0])) == \
        pytest.approx(0.5)
    assert bit_error_fraction(np.zeros(0), np.zeros(0)) == 0.0


def test_frame_rng_streams_are_stable_and_distinct():
    a = frame_rng(1, 0).random(4)
    b = frame_rng(1, 0).random(4)
    c = frame_rng(1, 1).random(4)
    d = frame_rng(2, 0).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_sample_frame_reproducible():
    code, source = get_code("C5")
    s1, b1 = sample_frame(code, source, 50, frame_rng(9, 4))
    s2, b2 = sample_frame(code, source, 50, frame_rng(9, 4))
    assert np.array_equal(s1, s2) and np.array_equal(b1, b2)
    decoded, end = hard_decode(code, b1)
    assert end == "" and len(decoded) == 50


def _tiny_sweep(workers):
    config = ExperimentConfig(codes=("C5",), l_s=30, ebn0_list=(5.0,),
                              t_list=(2, BIT_SYMBOL), trials=300,
                              master_seed=11)
    return run_fer_sweep(config, workers=workers)


def test_sweep_reproducible_and_worker_independent():
    r1 = _tiny_sweep(workers=1)
    r2 = _tiny_sweep(workers=1)
    r3 = _tiny_sweep(workers=2)
    assert r1.to_csv() == r2.to_csv() == r3.to_csv()
    assert r1.to_json() == r3.to_json()


def test_sweep_row_contents():
    report = _tiny_sweep(workers=1)
    assert report.meta["ber_definition"]
    row = report.rows[0]
    assert row["t"] == "2"
    assert 0.0 <= row["fer"] <= 1.0
    assert 0.0 <= row["ber"] <= 1.0
    assert 0.0 <= row["nld"] <= 1.0
    assert row["infeasible"] == 0
    assert row["trials"] == 300
    assert row["branch_ops_mean"] > 0


def test_noiseless_sweep_fer_zero_implies_ber_zero():
    config = ExperimentConfig(codes=("C5",), l_s=20, ebn0_list=(20.0,),
                              t_list=(1,), trials=50, master_seed=3)
    row = run_fer_sweep(config).rows[0]
    assert row["fer"] == 0.0
    assert row["ber"] == 0.0
    assert row["nld"] == 0.0


def test_experiment_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(codes=("C5",), l_s=10, ebn0_list=(6.0,), trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(codes=("C5",), l_s=10, ebn0_list=(6.0,), eta=0.5)
    with pytest.raises(ValueError):
        ExperimentConfig(codes=("C5",), l_s=10, ebn0_list=(6.0,),
                         t_list=("nope",))


def test_fer_ranking_matches_entropy_criterion():
    """Higher constraint entropy, better length-constrained decoding: the
    three-code ranking at 6 dB on the exact state model."""
    config = ExperimentConfig(codes=("C5", "C7", "C10"), l_s=100,
                              ebn0_list=(6.0,), t_list=(BIT_SYMBOL,),
                              trials=400, master_seed=21)
    report = run_fer_sweep(config, workers=2)
    fer = {row["code"]: row["fer"] for row in report.rows}
    h = {row["code"]: row["h_delta_s"] for row in report.rows}
    assert h["C10"] > h["C7"] > h["C5"]
    assert fer["C10"] < fer["C7"] < fer["C5"]


def test_hard_decoding_stays_within_pseudo_degree():
    """Unconstrained hard parses land inside [-d_eta, d_eta] essentially
    always (the aggregation-safety property behind choosing T > d_eta)."""
    code, source = get_code("C5")
    channel = Awgn(6.0)
    d_eta = 3
    for i in range(1500):
        rng = frame_rng(77, i)
        sym, bits = sample_frame(code, source, 100, rng)
        rx = channel.transmit(bits, rng)
        decoded, _ = hard_decode(code, channel.hard_bits(rx))
        assert abs(len(decoded) - 100) <= d_eta


def test_criteria_table_report():
    report = run_criteria_table(("C5", "C10"), 100, 6.0)
    assert [row["code"] for row in report.rows] == ["C5", "C10"]
    row = report.rows[0]
    assert row["d_eta"] == 3
    assert row["p_sync"] == pytest.approx(0.91866, abs=1e-4)
    assert row["h_lower_bound"] <= row["h_mod_2d1"] <= row["h_delta_s"]
    assert "C5" in report.meta["delta_pmf"]
    assert report.meta["prob_strings"]["C5"][0] == "0.4"


def test_entropy_convergence_report():
    report = run_entropy_convergence("C13", 100, 6.0, 5)
    by_t = {row["t"]: row["h_mod_t"] for row in report.rows}
    assert by_t[1] == 0.0
    assert by_t[2] == 0.0
    assert by_t[3] > 0.0
    assert all(h <= report.meta["h_delta_s"] + 1e-12 for h in by_t.values())


def test_cost_comparison_report():
    report = run_cost_comparison("C7", 40, 3, 4, (2.0, 7.0), trials=40,
                                 master_seed=5)
    assert len(report.rows) == 2
    low, high = report.rows
    assert low["rho"] >= high["rho"]
    assert high["ratio_mtd_direct"] == pytest.approx(7.0 / 12.0, abs=0.08)
    assert low["rho_star"] == pytest.approx(0.41667, abs=1e-4)
    for row in report.rows:
        assert row["d_bal"] > 0
        assert row["ratio_mtd_bal"] >= row["t1"] + row["t2"] - 1


def test_report_formatting():
    report = Report(columns=["a", "b"], meta={"kind": "x", "note": "n"})
    report.add_row(a=0.123456789, b=3)
    csv_text = report.to_csv()
    assert "# kind: x" in csv_text
    assert "0.123457,3" in csv_text
    data = json.loads(report.to_json())
    assert data["rows"][0]["a"] == 0.123457
    assert fmt_value(True) == "true"
    with pytest.raises(ValueError):
        report.add_row(a=1)
    with pytest.raises(ValueError):
        report.render("yaml")


# -- command-line interface -------------------------------------------------

def test_cli_list_codes(capsys):
    assert main(["list-codes"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert len(lines) == 1 + 19
    assert lines[0].startswith("code,symbols,")


def test_cli_list_codes_json_preserves_prob_strings(capsys):
    assert main(["list-codes", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    c17 = data["meta"]["records"]["C17"]
    assert c17[0] == {"symbol": "A", "probability": "0.08833733",
                      "codeword": "0000"}


def test_cli_analyze(capsys, tmp_path):
    assert main(["analyze", "--code", "C5", "--ls", "100", "--ebn0", "6",
                 "--eta", "1e-6"]) == 0
    out = capsys.readouterr().out
    header = next(l for l in out.splitlines() if l.startswith("code,"))
    row = next(l for l in out.splitlines() if l.startswith("C5,"))
    cells = dict(zip(header.split(","), row.split(",")))
    assert cells["d_eta"] == "3"
    assert float(cells["p_sync"]) == pytest.approx(0.918665, abs=1e-5)
    assert float(cells["mepl"]) == pytest.approx(1.71023, abs=1e-4)
    # figure + file output
    out_file = tmp_path / "criteria.csv"
    fig_file = tmp_path / "criteria.png"
    assert main(["analyze", "--code", "C5", "--out", str(out_file),
                 "--plot", str(fig_file)]) == 0
    assert out_file.read_text().startswith("#")
    assert fig_file.stat().st_size > 0


def test_cli_simulate(capsys, tmp_path):
    out_file = tmp_path / "sweep.json"
    fig_file = tmp_path / "sweep.png"
    assert main(["simulate", "--code", "C5", "--ls", "20", "--ebn0", "5",
                 "--ebn0", "7", "--T", "1", "--T", "bit/symbol",
                 "--trials", "40", "--seed", "2", "--format", "json",
                 "--out", str(out_file), "--plot", str(fig_file)]) == 0
    data = json.loads(out_file.read_text())
    assert len(data["rows"]) == 4
    assert {row["t"] for row in data["rows"]} == {"1", "bit/symbol"}
    assert fig_file.stat().st_size > 0


def test_cli_entropy_curve(capsys, tmp_path):
    fig_file = tmp_path / "curve.png"
    assert main(["entropy-curve", "--code", "C13", "--tmax", "3",
                 "--plot", str(fig_file)]) == 0
    out = capsys.readouterr().out
    rows = [l.split(",") for l in out.splitlines()
            if l and not l.startswith(("#", "code,"))]
    assert [r[3] for r in rows] == ["1", "2", "3"]
    assert float(rows[1][4]) == 0.0
    assert fig_file.stat().st_size > 0


def test_cli_cost_curve(tmp_path):
    out_file = tmp_path / "cost.csv"
    fig_file = tmp_path / "cost.png"
    assert main(["cost-curve", "--code", "C7", "--ls", "30", "--t1", "3",
                 "--t2", "4", "--ebn0", "3", "--ebn0", "7", "--trials", "15",
                 "--out", str(out_file), "--plot", str(fig_file)]) == 0
    text = out_file.read_text()
    assert "ratio_mtd_direct" in text
    assert fig_file.stat().st_size > 0


def test_cli_errors(capsys):
    assert main(["analyze", "--code", "NOPE"]) == 2
    assert "unknown code" in capsys.readouterr().err
    assert main(["entropy-curve", "--code", "C5", "--code", "C7"]) == 2
    with pytest.raises(SystemExit):
        main(["simulate", "--T", "zero"])
    with pytest.raises(SystemExit):
        main(["no-such-command"])
