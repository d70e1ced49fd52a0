"""
Unit tests for gate configurations, calibration and gate runs on short chains
"""

import logging
import math

import numpy as np
import pandas as pd
import pytest

from giantcz.errors import CalibrationError, ConfigurationError
from giantcz.protocol import (
    GateConfig,
    RevivalTracker,
    SolverConfig,
    calibrate_omega2,
    calibrate_placement,
    df_condition_guard,
    edge_reflection_guard,
    gate_time_ns,
    horizon,
    parabolic_peak,
    preset,
    preset_horizon,
    run_cz,
    run_dynamics,
    satisfies_df_condition,
    sweep_g,
)
from giantcz.tomography import GateResult

from tests.fixtures.sample_systems import create_small_gate

FAST_SOLVER = SolverConfig(dt=0.5, t_max=5.0)


class TestPresets:
    """Published parameter sets"""

    def test_three_point_preset(self):
        config = preset("3e")
        assert config.geometry == "three_point"
        assert (config.dx, config.zeta, config.g) == (2, 1.97, 0.1)
        assert (config.omega1, config.omega2) == (0.17, -0.17)
        assert config.num_sites == 100
        assert config.name == "3e"

    def test_gate_presets(self):
        assert preset("4a") == preset("3e").with_changes(name="4a")
        assert preset("4b").g == 0.05
        assert preset_horizon("4b") == 400.0
        assert preset_horizon("3c") == 150.0

    def test_two_point_preset(self):
        config = preset("2d")
        assert config.omega1 == pytest.approx(math.sqrt(2))
        assert config.alpha1 == pytest.approx(-2 * math.sqrt(2))

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationError, match="unknown preset"):
            preset("9z")

    @pytest.mark.parametrize("preset_id", ["2d", "2e", "3c", "3d", "3e", "4a", "4b"])
    def test_presets_sit_on_decoherence_free_frequencies(self, preset_id):
        assert satisfies_df_condition(preset(preset_id))

    def test_detuned_config_fails_df_condition(self):
        assert not satisfies_df_condition(preset("3e").with_changes(omega1=0.3))


class TestGateConfig:
    """Geometry layout and validation"""

    def test_interleaved_layout_is_centered(self):
        layout = preset("3e").layout()
        assert [p.site for p in layout.atom1] == [47, 49, 51]
        assert [p.site for p in layout.atom2] == [48, 50, 52]
        assert [p.strength for p in layout.atom1] == pytest.approx([0.1, 0.197, 0.1])

    def test_separate_placement(self):
        config = preset("3e").with_changes(placement="separate")
        assert config.resolved_offset() == 6
        layout = config.layout()
        assert max(p.site for p in layout.atom1) < min(p.site for p in layout.atom2)

    def test_explicit_offset(self):
        config = preset("3e").with_changes(atom2_offset=-1)
        layout = config.layout()
        assert [p.site for p in layout.atom2] == [p.site - 1 for p in layout.atom1]

    def test_shared_site_is_rejected(self):
        with pytest.raises(ConfigurationError, match="both atoms"):
            preset("3e").with_changes(atom2_offset=2)

    def test_block_must_fit(self):
        with pytest.raises(ConfigurationError, match="does not fit"):
            create_small_gate(num_sites=5)

    def test_alpha2_default(self):
        config = GateConfig(alpha1=-2.0, num_sites=10)
        assert config.alpha2 == pytest.approx(-2.3)

    def test_custom_geometry(self):
        config = GateConfig(geometry="custom", points=((0, 1.0), (3, 0.5)), g=0.2, num_sites=12)
        layout = config.layout()
        assert [p.strength for p in layout.atom1] == pytest.approx([0.2, 0.1])
        assert config.df_solutions() == []

    def test_custom_geometry_needs_two_points(self):
        with pytest.raises(ConfigurationError):
            GateConfig(geometry="custom", points=((0, 1.0),), num_sites=12)

    def test_unknown_geometry(self):
        with pytest.raises(ConfigurationError):
            GateConfig(geometry="ring")

    def test_system_spec(self):
        config = create_small_gate(qubit_decay=1e-3, cavity_decay=2e-3)
        spec = config.system_spec()
        assert spec.num_sites == 12
        assert spec.lattice.cavity_decay == 2e-3
        assert spec.atoms[1].omega == config.omega2
        assert spec.atoms[0].decay == 1e-3

    def test_resonance(self):
        assert preset("3c").resonance == pytest.approx(1.0 - 2.0)


class TestRules:
    """Horizon, edge guard and unit conversion"""

    def test_horizon(self):
        assert horizon(0.1) == 150.0
        assert horizon(0.175) == 150.0
        assert horizon(0.05) == 400.0
        assert horizon(0.03) > 1000.0

    def test_edge_guard_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            assert not edge_reflection_guard(preset("3e"), 150.0)
        assert "Edge reflections" in caplog.text

    def test_edge_guard_quiet_for_short_runs(self):
        assert edge_reflection_guard(preset("3e"), 10.0)

    def test_df_guard(self, small_gate, caplog):
        assert df_condition_guard(small_gate)
        with caplog.at_level(logging.WARNING):
            assert not df_condition_guard(small_gate.with_changes(omega1=0.5))
        assert "not both decoherence-free" in caplog.text

    def test_runs_warn_off_the_df_frequency(self, small_gate, caplog):
        detuned = small_gate.with_changes(omega1=0.5)
        with caplog.at_level(logging.WARNING, logger="giantcz.protocol"):
            run_dynamics(detuned, FAST_SOLVER)
            assert caplog.text.count("not both decoherence-free") == 1
            run_cz(detuned, FAST_SOLVER)
        assert caplog.text.count("not both decoherence-free") == 2

    def test_runs_quiet_on_the_df_frequency(self, small_gate, caplog):
        with caplog.at_level(logging.WARNING, logger="giantcz.protocol"):
            run_dynamics(small_gate, FAST_SOLVER)
        assert "decoherence-free" not in caplog.text

    def test_gate_time_in_ns(self):
        assert gate_time_ns(297.0, 200.0) == pytest.approx(236.3, abs=0.05)

    def test_solver_grid_uses_horizon(self):
        assert SolverConfig().grid(0.05).t_max == 400.0
        assert SolverConfig(t_max=20.0).grid(0.05).t_max == 20.0

    def test_solver_validation(self):
        with pytest.raises(ConfigurationError):
            SolverConfig(dt=0.0)
        with pytest.raises(ConfigurationError):
            SolverConfig(threads=0)


class TestPeakDetection:
    """Parabolic refinement and revival tracking"""

    def test_parabola_vertex_is_exact(self):
        times = np.linspace(0, 10, 11)
        values = 1.0 - (times - 4.3) ** 2
        t, v = parabolic_peak(times, values, int(np.argmax(values)))
        assert t == pytest.approx(4.3)
        assert v == pytest.approx(1.0)

    def test_edge_index_is_returned_as_is(self):
        assert parabolic_peak([0.0, 1.0, 2.0], [3.0, 2.0, 1.0], 0) == (0.0, 3.0)

    def test_revival_of_cosine(self):
        period = 60.0
        tracker = RevivalTracker()
        confirmed_at = None
        for t in np.arange(0.0, 120.0, 0.5):
            if tracker.update(float(t), math.cos(math.pi * t / period) ** 2):
                confirmed_at = t
                break
        assert confirmed_at is not None
        dip_time, dip_value = tracker.dip()
        revival_time, revival_value = tracker.revival()
        assert dip_time == pytest.approx(period / 2, abs=0.05)
        assert revival_time == pytest.approx(period, abs=0.05)
        assert tracker.contrast() == pytest.approx(1.0, abs=1e-3)

    def test_flat_signal_has_no_revival(self):
        tracker = RevivalTracker()
        for t in range(50):
            tracker.update(float(t), 1.0)
        tracker.finish()
        assert not tracker.found
        assert tracker.contrast() == 0.0
        with pytest.raises(CalibrationError):
            tracker.revival()

    def test_finish_accepts_running_maximum(self):
        tracker = RevivalTracker()
        for t, value in enumerate([1.0, 0.5, 0.1, 0.4, 0.8]):
            tracker.update(float(t), value)
        tracker.finish()
        assert tracker.found
        assert tracker.revival() == (4.0, 0.8)

    def test_early_wiggle_is_not_the_revival(self):
        """A fast shallow transient before the slow exchange must not count."""
        tracker = RevivalTracker()
        for t in np.arange(0.0, 160.0, 0.25):
            transient = 1.0 - 0.14 * math.exp(-t / 4.0) * math.sin(math.pi * t / 1.6) ** 2
            value = math.cos(math.pi * t / 80.0) ** 2 * transient + 0.03 * math.sin(2 * math.pi * t / 2.3)
            if tracker.update(float(t), value):
                break
        assert tracker.found
        assert tracker.dip()[0] == pytest.approx(40.0, abs=2.0)
        assert tracker.revival()[0] == pytest.approx(80.0, abs=2.0)
        assert tracker.revival()[1] > 0.95
        assert tracker.contrast() > 0.95

    def test_shallow_oscillation_has_no_revival(self):
        tracker = RevivalTracker()
        for t in np.arange(0.0, 100.0, 0.25):
            tracker.update(float(t), 1.0 - 0.3 * math.sin(t) ** 2)
        tracker.finish()
        assert not tracker.found

    def test_decay_with_ripples_has_no_revival(self):
        tracker = RevivalTracker()
        for t in np.arange(0.0, 100.0, 0.25):
            tracker.update(float(t), math.exp(-t / 10.0) + 0.05 * math.sin(t) ** 2)
        tracker.finish()
        assert not tracker.found
        assert tracker.contrast() == 0.0


class TestRuns:
    """Dynamics and fidelity runs on a short chain"""

    def test_dynamics_columns_and_start(self, small_gate):
        frame = run_dynamics(small_gate, FAST_SOLVER)
        assert list(frame.columns) == ["t_J", "n11", "n20", "n02", "norm"]
        assert len(frame) == 11
        assert frame["n11"].iloc[0] == 1.0
        assert frame["t_J"].iloc[-1] == pytest.approx(5.0)
        assert np.allclose(frame["norm"], 1.0, atol=1e-10)

    def test_uncoupled_atoms_stay_in_eleven(self):
        frame = run_dynamics(create_small_gate(g=0.0), FAST_SOLVER)
        assert np.allclose(frame["n11"], 1.0, atol=1e-12)
        assert np.allclose(frame["n20"], 0.0, atol=1e-12)

    def test_decay_lowers_norm(self):
        config = create_small_gate(qubit_decay=0.01, cavity_decay=0.01)
        frame = run_dynamics(config, FAST_SOLVER)
        assert frame["norm"].iloc[-1] < frame["norm"].iloc[0]

    def test_uncoupled_gate_is_local_phase_only(self):
        frame, result = run_cz(create_small_gate(g=0.0), FAST_SOLVER)
        assert list(frame.columns) == [
            "t", "process_fidelity", "average_fidelity", "phi1", "phi2", "trace_deficit",
        ]
        # Free evolution is a local-Z unitary: after correction it is at best
        # |Tr(CZ^dag Z(pi/2) x Z(pi/2))|^2 / 16 = 0.5 away from CZ, never worse than identity
        assert frame["process_fidelity"].between(0.25 - 1e-9, 0.5 + 1e-6).all()
        assert isinstance(result, GateResult)
        assert result.average_fidelity == pytest.approx((4 * result.process_fidelity + 1) / 5)

    def test_run_cz_is_deterministic(self, small_gate):
        first, result_a = run_cz(small_gate, FAST_SOLVER)
        second, result_b = run_cz(small_gate, SolverConfig(dt=0.5, t_max=5.0, threads=1))
        pd.testing.assert_frame_equal(first, second)
        assert result_a.gate_time == result_b.gate_time

    def test_fidelity_frame_is_consistent(self, small_gate):
        frame, result = run_cz(small_gate, FAST_SOLVER)
        assert frame["process_fidelity"].between(0.0, 1.0).all()
        assert result.process_fidelity >= frame["process_fidelity"].max() - 1e-12
        assert frame["trace_deficit"].abs().max() < 1.0


class TestCalibration:
    """omega2 calibration and placement choice"""

    def test_halfwidth_limit(self, small_gate):
        with pytest.raises(ConfigurationError):
            calibrate_omega2(small_gate, search_halfwidth=0.2, solver=FAST_SOLVER)

    def test_no_revival_is_a_calibration_error(self):
        with pytest.raises(CalibrationError, match="no \\|11> revival"):
            calibrate_omega2(create_small_gate(g=0.0), solver=FAST_SOLVER, coarse_points=3)

    def test_picks_best_contrast(self, mocker, small_gate):
        center = small_gate.resonance

        def fake_score(config, omega2, solver):
            return max(0.0, 1.0 - abs(omega2 - (center + 0.012)) * 10), 50.0

        mocker.patch("giantcz.protocol.revival_score", side_effect=fake_score)
        omega2 = calibrate_omega2(small_gate, search_halfwidth=0.05, solver=FAST_SOLVER)
        assert omega2 == pytest.approx(center + 0.012, abs=1e-3)

    def test_placement(self, mocker, small_gate):
        scores = {1: (0.4, 80.0), 6: (0.9, 75.0)}

        def fake_score(config, omega2, solver):
            return scores[config.resolved_offset()]

        mocker.patch("giantcz.protocol.revival_score", side_effect=fake_score)
        name, offset, score = calibrate_placement(small_gate.with_changes(num_sites=20), solver=FAST_SOLVER)
        assert (name, offset, score) == ("separate", 6, 0.9)


class TestSweep:
    """Coupling-strength sweeps"""

    def test_values_must_be_sorted(self, small_gate):
        with pytest.raises(ConfigurationError, match="ascending"):
            sweep_g(small_gate, [0.1, 0.05])

    def test_values_must_be_positive(self, small_gate):
        with pytest.raises(ConfigurationError):
            sweep_g(small_gate, [0.0, 0.1])

    def test_failed_point_is_recorded(self, mocker, small_gate):
        def fake_calibration(config, search_halfwidth, solver):
            if config.g < 0.05:
                raise CalibrationError("no revival")
            return config.resonance

        def fake_run(config, solver):
            return pd.DataFrame(), GateResult(gate_time=1 / config.g, process_fidelity=0.9)

        mocker.patch("giantcz.protocol.calibrate_omega2", side_effect=fake_calibration)
        run = mocker.patch("giantcz.protocol.run_cz", side_effect=fake_run)

        table = sweep_g(small_gate, [0.03, 0.1], qubit_decay=1e-5, cavity_decay=2e-5, solver=FAST_SOLVER)

        assert list(table["g_over_J"]) == [0.03, 0.1]
        assert math.isnan(table["fidelity_process"].iloc[0])
        assert table["error"].iloc[0] == "no revival"
        assert table["fidelity_process"].iloc[1] == pytest.approx(0.9)
        assert table["tau_J"].iloc[1] == pytest.approx(10.0)
        assert table["error"].iloc[1] == ""
        config = run.call_args[0][0]
        assert (config.qubit_decay, config.cavity_decay) == (1e-5, 2e-5)

    def test_without_calibration_keeps_omega2(self, mocker, small_gate):
        calibration = mocker.patch("giantcz.protocol.calibrate_omega2")
        mocker.patch(
            "giantcz.protocol.run_cz",
            return_value=(pd.DataFrame(), GateResult(gate_time=5.0, process_fidelity=0.5)),
        )
        table = sweep_g(small_gate, [0.1], solver=FAST_SOLVER, calibrate=False)
        calibration.assert_not_called()
        assert table["omega2_calibrated"].iloc[0] == small_gate.omega2
