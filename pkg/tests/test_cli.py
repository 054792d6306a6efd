import json

import pytest

from forrelab.cli import build_parser, main
from forrelab.services.experiments import load_report
from forrelab.services.oracle_world import load_world


@pytest.fixture
def saved_world(tmp_path):
    path = tmp_path / "world.frlb"
    assert main(["sample-world", "--profile", "desk", "--seed", "3", "--out", str(path)]) == 0
    return path


class TestWorldCommands:
    """sample-world, save, load and decode"""

    def test_sample_and_load(self, tmp_path, capsys):
        path = tmp_path / "world.frlb"
        assert main(["sample-world", "--profile", "desk", "--seed", "3", "--out", str(path)]) == 0
        sampled = capsys.readouterr().out
        assert main(["load", "--world", str(path)]) == 0
        loaded = capsys.readouterr().out
        digest = sampled.split("digest=")[1].split()[0]
        assert f"digest={digest}" in loaded
        assert "stored blocks: 16" in loaded

    def test_decode(self, saved_world, capsys):
        assert main(["decode", "--world", str(saved_world), "--k", "01", "--x", "10", "--seed", "4"]) == 0
        last = capsys.readouterr().out.splitlines()[-1]
        assert last.startswith("decoded ")
        assert last.endswith(", match)")

    def test_decode_needs_key_bits(self, saved_world):
        assert main(["decode", "--world", str(saved_world), "--k", "1", "--x", "10"]) == 2

    def test_save_with_replacement(self, saved_world, tmp_path):
        out = tmp_path / "planted.frlb"
        args = ["save", "--world", str(saved_world), "--out", str(out), "--region", "f", "--row", "1", "--pattern", "1010"]
        assert main(args) == 0
        assert load_world(out).f_k(1) == "1010"

    def test_save_needs_pattern(self, saved_world, tmp_path):
        out = tmp_path / "planted.frlb"
        assert main(["save", "--world", str(saved_world), "--out", str(out), "--region", "f"]) == 2

    def test_trapdoor_decode_bounds(self, tmp_path, capsys):
        path = tmp_path / "trapdoor.frlb"
        assert main(["sample-world", "--profile", "desk-trapdoor", "--n", "1", "--ell", "2", "--out", str(path)]) == 0
        assert main(["decode", "--world", str(path), "--region", "G", "--row", "1", "--col", "2"]) == 0
        assert main(["decode", "--world", str(path), "--region", "G", "--row", "1", "--col", "9"]) == 2
        assert main(["decode", "--world", str(path), "--region", "F", "--row", "9,0"]) == 2

    def test_missing_snapshot(self, tmp_path):
        assert main(["load", "--world", str(tmp_path / "absent.frlb")]) == 2

    def test_unknown_profile(self):
        assert main(["sample-world", "--profile", "no-such-profile"]) == 2


class TestCircuitCommands:
    """gw-check and sensitivity"""

    def test_gw_check_passes(self, capsys):
        assert main(["gw-check", "--builder", "parity", "--K", "3", "--M", "2"]) == 0
        assert "Eq(3) identity: PASS" in capsys.readouterr().out

    def test_gw_check_random_circuit(self, capsys):
        assert main(["gw-check", "--builder", "random", "--size", "8", "--depth", "2", "--seed", "5"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_gw_check_rejects_non_utf8_netlist(self, tmp_path):
        path = tmp_path / "circuit.txt"
        path.write_bytes(b"\xff\xfe\x00")
        assert main(["gw-check", "--circuit", str(path), "--K", "2", "--M", "2"]) == 2

    def test_sensitivity_report(self, tmp_path, capsys):
        args = ["sensitivity", "--builder", "or", "--inputs", "6", "--t", "1", "--trials", "50", "--out-dir", str(tmp_path)]
        assert main(args) == 0
        report = json.loads((tmp_path / "sensitivity-tail-seed0.json").read_text())
        assert report["spec"]["game"] == "sensitivity-tail"
        assert "tail_exact" in capsys.readouterr().out

    def test_too_many_inputs(self):
        assert main(["sensitivity", "--inputs", "500"]) == 2


class TestGameCommands:
    """Games, reports and the protocol demos"""

    def test_prf_game_and_report(self, tmp_path, capsys):
        args = ["prf-game", "--adversary", "constant1", "--trials", "20", "--out-dir", str(tmp_path)]
        assert main(args) == 0
        assert "advantage" in capsys.readouterr().out
        path = tmp_path / "prf-distinguish-seed0.json"
        assert main(["report", str(path)]) == 0
        assert main(["report", str(path), "--csv"]) == 0
        assert capsys.readouterr().out.splitlines()[-1].startswith("prf-distinguish,0,20,")

    def test_decode_compare_prf_game(self, tmp_path):
        args = ["prf-game", "--adversary", "decode-compare", "--trials", "200", "--seed", "2",
                "--out-dir", str(tmp_path)]
        assert main(args) == 0
        report = load_report(tmp_path / "prf-distinguish-seed2.json")
        # a uniform 4-bit table hits one of the 4 rows with probability about 0.23
        assert report.estimate("real").value >= 0.95
        assert 0.65 <= report.estimate("advantage").value <= 0.9
        assert report.query_counts["max_per_trial"] <= 40

    def test_run_spec_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"game": "resample", "trials": 5, "adversary": {"name": "constant0"}}))
        assert main(["run", "--spec", str(spec), "--out-dir", str(tmp_path)]) == 0
        assert (tmp_path / "resample-seed0.csv").exists()

    def test_bad_spec_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"game": "no-such-game"}))
        assert main(["run", "--spec", str(spec)]) == 2

    def test_towf_game(self, tmp_path, capsys):
        args = ["towf-game", "--profile", "desk-trapdoor", "--inverter", "trapdoor-holding",
                "--trials", "10", "--out-dir", str(tmp_path)]
        assert main(args) == 0
        assert "trapdoor_correctness" in capsys.readouterr().out

    def test_trapdoor_game_on_prf_profile(self, tmp_path):
        assert main(["towf-game", "--trials", "5", "--out-dir", str(tmp_path)]) == 2

    def test_np_demo(self, saved_world, tmp_path, capsys):
        target = tmp_path / "target.txt"
        target.write_text("WITNESS 2\ng AND w0 w1\nOUTPUT g\n")
        assert main(["np-demo", "--world", str(saved_world), "--target", str(target)]) == 0
        assert "witness: 11" in capsys.readouterr().out

    def test_np_demo_unsatisfiable(self, saved_world, tmp_path, capsys):
        target = tmp_path / "target.txt"
        target.write_text("WITNESS 1\nn NOT w0\ng AND w0 n\nOUTPUT g\n")
        assert main(["np-demo", "--world", str(saved_world), "--target", str(target)]) == 0
        assert "witness: none" in capsys.readouterr().out

    def test_key_exchange(self, capsys):
        assert main(["pke", "--profile", "desk-trapdoor", "--trials", "2"]) == 0
        out = capsys.readouterr().out
        assert "alice" in out
        assert "key agreement: 2/2" in out

    def test_oblivious_transfer(self, capsys):
        assert main(["ot", "--profile", "desk-trapdoor", "--trials", "2", "--x0", "1", "--x1", "0", "--y", "0"]) == 0
        assert "receiver output x_y: 2/2" in capsys.readouterr().out

    def test_protocols_need_trapdoor_profiles(self):
        assert main(["pke", "--trials", "1"]) == 2

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["frobnicate"])
