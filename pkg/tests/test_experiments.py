import json

import pytest
from pydantic import ValidationError

from forrelab.agents import AdversaryRef
from forrelab.core.errors import DomainRangeError, ShapeMismatchError
from forrelab.core.stats import Verdict
from forrelab.services.experiments import (
    CSV_COLUMNS,
    CircuitRef,
    EventLog,
    GameKind,
    GameSpec,
    InvertMode,
    ResampleConfig,
    build_circuit,
    load_report,
    run_game,
    run_trials,
)


def spec(game: GameKind, **fields) -> GameSpec:
    fields.setdefault("trials", 40)
    return GameSpec(game=game, **fields)


class TestSpecs:
    """Game specifications"""

    def test_profile_presets(self):
        s = spec(GameKind.TOWF_INVERT, profile="desk-trapdoor")
        assert s.profile.lam == 6
        assert s.query_cap() == 40
        assert spec(GameKind.TOWF_INVERT, cap=7).query_cap() == 7

    def test_unknown_profile(self):
        with pytest.raises((DomainRangeError, ValidationError)):
            spec(GameKind.PRF_DISTINGUISH, profile="nope")

    def test_trials_positive(self):
        with pytest.raises(ValidationError):
            spec(GameKind.PRF_DISTINGUISH, trials=0)

    def test_workers_not_in_the_report(self):
        assert "workers" not in spec(GameKind.PRF_DISTINGUISH, workers=3).model_dump()

    def test_circuit_builders(self):
        assert build_circuit(CircuitRef(builder="and", num_inputs=5)).num_inputs == 5
        with pytest.raises(DomainRangeError):
            build_circuit(CircuitRef(builder="phi-proxy", num_inputs=6))
        with pytest.raises(DomainRangeError):
            build_circuit(CircuitRef(builder="majority"))


class TestTrials:
    """Seeded trial execution"""

    def test_results_in_trial_order(self):
        work = lambda i, s: (i, int(s.generate_state(1)[0]))
        serial = run_trials(work, 12, seed=3, workers=1)
        threaded = run_trials(work, 12, seed=3, workers=4)
        assert serial == threaded
        assert [i for i, _ in serial] == list(range(12))

    def test_batches(self):
        done = []
        run_trials(lambda i, s: i, 20, seed=0, on_batch=done.append)
        assert done == [2 * k for k in range(1, 11)]


class TestPrfGame:
    """PRF distinguishing"""

    def test_constant_adversary_has_no_advantage(self):
        report = run_game(spec(GameKind.PRF_DISTINGUISH, adversary=AdversaryRef(name="constant1")))
        assert report.estimate("advantage").value == 0.0
        assert report.check("advantage_vs_zero").verdict is Verdict.CONSISTENT
        assert report.query_counts["max_per_trial"] == 0

    def test_rigged_world(self):
        report = run_game(spec(GameKind.PRF_DISTINGUISH, trials=300, rigged=True,
                               adversary=AdversaryRef(name="first-bit")))
        assert report.estimate("real").value == 1.0
        assert report.check("advantage_vs_rigged").verdict is Verdict.CONSISTENT
        assert report.check("advantage_vs_zero").verdict is Verdict.INCONSISTENT

    def test_rigged_world_squared(self):
        report = run_game(spec(GameKind.PRF_DISTINGUISH, trials=400, rigged=True, seed=1,
                               adversary=AdversaryRef(name="first-bit", squaring=True)))
        assert report.check("advantage_vs_rigged").bound == 0.25
        assert report.check("advantage_vs_rigged").verdict is Verdict.CONSISTENT
        assert report.query_counts["decodes"] > 0

    def test_wrong_profile(self):
        with pytest.raises(ShapeMismatchError):
            run_game(spec(GameKind.PRF_DISTINGUISH, profile="desk-trapdoor"))


class TestReports:
    """Canonical output and reproducibility"""

    def test_reproducible(self):
        s = spec(GameKind.PRF_DISTINGUISH, trials=30, seed=5, adversary=AdversaryRef(name="random"))
        first = run_game(s)
        second = run_game(s.model_copy(update={"workers": 4}))
        assert first.canonical_json() == second.canonical_json()
        assert first.to_csv() == second.to_csv()
        assert first.world_digest == second.world_digest

    def test_seed_changes_the_run(self):
        base = spec(GameKind.PRF_DISTINGUISH, trials=10, adversary=AdversaryRef(name="random"))
        assert run_game(base).world_digest != run_game(base.model_copy(update={"seed": 1})).world_digest

    def test_csv_layout(self):
        report = run_game(spec(GameKind.PRF_DISTINGUISH, trials=10))
        lines = report.to_csv().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert any(",check,advantage_vs_zero," in line for line in lines)
        assert any(",error_budget,decode_bit," in line for line in lines)

    def test_canonical_json_has_no_wall_time(self):
        report = run_game(spec(GameKind.PRF_DISTINGUISH, trials=10))
        assert "wall_time" not in json.loads(report.canonical_json())

    def test_write_and_load(self, tmp_path):
        report = run_game(spec(GameKind.PRF_DISTINGUISH, trials=10))
        json_path, csv_path = report.write(tmp_path)
        assert csv_path.read_text() == report.to_csv()
        assert load_report(json_path).canonical_json() == report.canonical_json()

    def test_summary(self):
        report = run_game(spec(GameKind.PRF_DISTINGUISH, trials=10))
        assert report.summary().startswith("prf-distinguish (prf(n=2, ell=8")


class TestEvents:
    """JSON-lines event log"""

    def test_world_game_events(self, tmp_path):
        path = tmp_path / "events.jsonl"
        run_game(spec(GameKind.PRF_DISTINGUISH, trials=20), event_log=EventLog(path))
        events = [json.loads(line) for line in path.read_text().splitlines()]
        assert events[0]["event"] == "game_start"
        assert events[-1]["event"] == "game_end"
        assert events[-1]["completed"] == 20
        assert sum(e["event"] == "trial_batch" for e in events) == 10

    def test_circuit_game_events(self, tmp_path):
        path = tmp_path / "events.jsonl"
        s = spec(GameKind.SENSITIVITY_TAIL, circuit=CircuitRef(builder="parity", num_inputs=4), t=4)
        report = run_game(s, event_log=EventLog(path))
        events = [json.loads(line)["event"] for line in path.read_text().splitlines()]
        assert events == ["game_start", "game_end"]
        assert report.wall_time > 0

    def test_no_path_is_silent(self):
        run_game(spec(GameKind.PRF_DISTINGUISH, trials=5), event_log=EventLog(None))


class TestInversionGames:
    """Trapdoor and one-way inversion"""

    def test_trapdoor_holding_inverts(self):
        report = run_game(spec(GameKind.TOWF_INVERT, profile="desk-trapdoor", trials=30,
                               adversary=AdversaryRef(inverter="trapdoor-holding")))
        assert report.estimate("success").value >= 0.9
        assert report.check("trapdoor_correctness").verdict is Verdict.CONSISTENT
        assert report.check("uniform_y_in_image").verdict is Verdict.CONSISTENT
        assert set(report.error_budgets) == {"gen", "inv"}

    def test_random_guess_matches_exact(self):
        report = run_game(spec(GameKind.TOWF_INVERT, profile="desk-trapdoor", trials=60,
                               mode=InvertMode.UNIFORM, adversary=AdversaryRef(inverter="random-guess")))
        assert report.check("random_guess_vs_exact").verdict is Verdict.CONSISTENT
        assert 0.25 <= report.estimate("random_guess_success_exact").value <= 1.0

    def test_owf_relaxed_indexing(self):
        report = run_game(spec(GameKind.OWF_INVERT, trials=40, adversary=AdversaryRef(inverter="random-guess")))
        assert any("relaxed" in note for note in report.notes)
        with pytest.raises(KeyError):
            report.check("collision_rate")
        assert report.check("random_guess_vs_exact").verdict is Verdict.CONSISTENT

    def test_pk_pseudorandom_with_fake_pk(self):
        report = run_game(spec(GameKind.PK_PSEUDORANDOM, profile="desk-trapdoor", trials=30,
                               adversary=AdversaryRef(name="fake-pk:trivial")))
        assert report.check("uniform_pk_in_g_image").verdict is Verdict.CONSISTENT
        assert "gen" in report.error_budgets


class TestResampleExperiment:
    """Paired runs on a world and its resampled copy"""

    @pytest.mark.parametrize("config,profile,name", [
        (ResampleConfig.PRF, "desk", "constant1"),
        (ResampleConfig.PUBLIC_KEY, "desk-trapdoor", "b-only"),
        (ResampleConfig.IMAGE, "desk-trapdoor", "constant0"),
    ])
    def test_region_ignoring_adversaries_agree(self, config, profile, name):
        report = run_game(spec(GameKind.RESAMPLE, trials=20, resample=config, profile=profile,
                               adversary=AdversaryRef(name=name)))
        assert report.estimate("disagree").value == 0.0
        assert report.estimate("difference").value == 0.0
        assert report.check("disagreement_region_ignoring").verdict is Verdict.CONSISTENT

    def test_image_statistics(self):
        report = run_game(spec(GameKind.RESAMPLE, trials=30, resample=ResampleConfig.IMAGE,
                               profile="desk-trapdoor", adversary=AdversaryRef(name="random")))
        assert report.check("trivial_inversion").verdict is Verdict.CONSISTENT
        assert report.estimate("image_density_exact").value <= 4 / 2 ** 12

    def test_profile_kind_must_fit(self):
        with pytest.raises(ShapeMismatchError):
            run_game(spec(GameKind.RESAMPLE, resample=ResampleConfig.PUBLIC_KEY, profile="desk"))


class TestCircuitGames:
    """Sensitivity, block resampling and planted blocks"""

    def test_parity_is_fully_sensitive(self):
        report = run_game(spec(GameKind.SENSITIVITY_TAIL, trials=50,
                               circuit=CircuitRef(builder="parity", num_inputs=6), t=6))
        assert report.estimate("tail").value == 1.0
        assert report.estimate("tail_exact").value == 1.0
        assert len(report.world_digest) == 64

    def test_single_bit_closed_form(self):
        report = run_game(spec(GameKind.BLOCK_RESAMPLE, trials=400, K=3, M=2, p=0.5,
                               circuit=CircuitRef(builder="single-bit", param=1)))
        assert report.estimate("flip_expected_exact").value == pytest.approx(1 / 6)
        assert report.check("single_bit_closed_form").verdict is Verdict.CONSISTENT

    def test_planted_blocks(self):
        report = run_game(spec(GameKind.PLANTED_INDIST, trials=400, pattern="1", block_ell=1,
                               circuit=CircuitRef(builder="phi-proxy")))
        assert report.check("telescoped_gaps").verdict is Verdict.CONSISTENT
        assert report.check("total_vs_exact").verdict is Verdict.CONSISTENT
        assert report.estimate("hybrid_0:0").trials == 400
