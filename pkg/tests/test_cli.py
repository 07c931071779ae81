import json

import pytest

from multispread.cli import main

from conftest import TWO_LAYER_TEXT


@pytest.fixture
def net_file(tmp_path):
    path = tmp_path / "demo.txt"
    path.write_text(TWO_LAYER_TEXT)
    return path


@pytest.fixture
def small_config(tmp_path):
    # tiny synthetic network and a 1-combo grid to keep runs fast
    cfg = {
        "synthetic": {"actors": 40, "layers": [["c", 0.12], ["o", 0.15]],
                      "contact_layer": "c", "seed": 6, "name": "syn"},
        "grid_pairs": [[0.28, 0.08]],
        "grid_multipliers": [2],
        "horizon": 25,
        "reps": 2,
        "master_seed": 11,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


class TestSummarize:
    def test_stdout_csv(self, net_file, capsys):
        assert main(["summarize", "--network", str(net_file),
                     "--contact-layer", "l1"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert out[0] == "network,layers,actors,nodes,edges,avg_degree"
        assert out[1].startswith("demo,2,6,10,11,")

    def test_output_file(self, net_file, tmp_path):
        target = tmp_path / "summary.csv"
        assert main(["summarize", "--network", str(net_file),
                     "--contact-layer", "l1", "--out", str(target)]) == 0
        assert target.read_text().startswith("network,layers")

    def test_missing_network_exits_2_and_names_path(self, tmp_path, capsys):
        missing = tmp_path / "nope.txt"
        assert main(["summarize", "--network", str(missing),
                     "--contact-layer", "l1"]) == 2
        assert str(missing) in capsys.readouterr().err

    def test_unknown_contact_layer_exits_2(self, net_file, capsys):
        assert main(["summarize", "--network", str(net_file),
                     "--contact-layer", "bogus"]) == 2
        assert "bogus" in capsys.readouterr().err


class TestSimulate:
    def test_writes_one_trace_per_run(self, small_config, tmp_path):
        out = tmp_path / "runs"
        assert main(["simulate", "--config", str(small_config),
                     "--scenario", "simultaneous", "--out", str(out)]) == 0
        files = sorted(out.glob("trace_*.csv"))
        assert len(files) == 2  # 1 combo x 1 scenario x 2 reps
        assert files[0].read_text().startswith("day,S,I,R,U,A")

    def test_blocking_zero_matches_simultaneous(self, small_config, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(["simulate", "--config", str(small_config),
                     "--scenario", "simultaneous", "--out", str(out_a)]) == 0
        assert main(["simulate", "--config", str(small_config),
                     "--scenario", "blocking:0", "--out", str(out_b)]) == 0
        a = sorted(out_a.glob("*.csv"))
        b = sorted(out_b.glob("*.csv"))
        assert len(a) == len(b) == 2
        for fa, fb in zip(a, b):
            assert fa.read_text() == fb.read_text()

    def test_bad_scenario_exits_2(self, small_config, tmp_path, capsys):
        assert main(["simulate", "--config", str(small_config),
                     "--scenario", "nonsense", "--out", str(tmp_path / "x")]) == 2
        assert "nonsense" in capsys.readouterr().err


class TestExperiment:
    def test_default_scenarios_and_outputs(self, small_config, tmp_path):
        out = tmp_path / "exp"
        assert main(["experiment", "--config", str(small_config),
                     "--out", str(out)]) == 0
        raw = (out / "raw_syn.csv").read_text().strip().splitlines()
        comp = (out / "comparison_syn.csv").read_text().strip().splitlines()
        # defaults: sir, simultaneous, blocking:21; 1 combo x 2 reps each
        assert len(raw) == 1 + 3 * 2
        comparisons = {line.split(",")[1] for line in comp[1:]}
        assert comparisons == {"sir_vs_simultaneous", "blocking:21_vs_simultaneous"}

    def test_blocking_days_add_delay_study_rows(self, small_config, tmp_path):
        out = tmp_path / "exp2"
        assert main(["experiment", "--config", str(small_config),
                     "--blocking-days", "7,14,21", "--out", str(out)]) == 0
        comp = (out / "comparison_syn.csv").read_text()
        assert "blocking:7_vs_blocking:21" in comp
        assert "blocking:14_vs_blocking:21" in comp

    def test_rerun_is_byte_identical(self, small_config, tmp_path):
        out_a = tmp_path / "e1"
        out_b = tmp_path / "e2"
        for out in (out_a, out_b):
            assert main(["experiment", "--config", str(small_config),
                         "--out", str(out)]) == 0
        assert (out_a / "raw_syn.csv").read_bytes() == (out_b / "raw_syn.csv").read_bytes()
        assert ((out_a / "comparison_syn.csv").read_bytes()
                == (out_b / "comparison_syn.csv").read_bytes())

    def test_flags_override_config(self, small_config, tmp_path):
        out = tmp_path / "exp3"
        assert main(["experiment", "--config", str(small_config),
                     "--reps", "1", "--scenario", "sir",
                     "--scenario", "simultaneous", "--out", str(out)]) == 0
        raw = (out / "raw_syn.csv").read_text().strip().splitlines()
        assert len(raw) == 1 + 2 * 1

    def test_raw_csv_carries_run_seed(self, small_config, tmp_path):
        out = tmp_path / "exp4"
        assert main(["experiment", "--config", str(small_config),
                     "--out", str(out)]) == 0
        header = (out / "raw_syn.csv").read_text().splitlines()[0]
        assert header.endswith("run_seed")


class TestConfig:
    def test_no_network_exits_2(self, capsys):
        assert main(["experiment", "--out", "x"]) == 2
        assert "network" in capsys.readouterr().err

    def test_unknown_config_key_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"unknown_key": 1}))
        assert main(["summarize", "--config", str(path)]) == 2
        assert "unknown_key" in capsys.readouterr().err

    def test_malformed_json_exits_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["summarize", "--config", str(path)]) == 2

    def test_bad_blocking_days_exits_2(self, small_config, tmp_path):
        assert main(["experiment", "--config", str(small_config),
                     "--blocking-days", "seven", "--out", str(tmp_path)]) == 2

    def test_zero_reps_exits_2(self, small_config, tmp_path):
        assert main(["simulate", "--config", str(small_config), "--reps", "0",
                     "--scenario", "sir", "--out", str(tmp_path / "x")]) == 2
        assert main(["experiment", "--config", str(small_config), "--reps", "0",
                     "--out", str(tmp_path / "y")]) == 2

    def test_unwritable_output_exits_3(self, small_config, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("a file, not a directory")
        code = main(["experiment", "--config", str(small_config),
                     "--out", str(blocker / "sub")])
        assert code == 3
        assert "i/o error" in capsys.readouterr().err
