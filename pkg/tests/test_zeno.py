"""Zeno survival law, Monte Carlo agreement, and the dual experiment."""

import math

import numpy as np
import pytest

from paradoxlab import qcore, zeno
from paradoxlab.constants import NATURAL
from paradoxlab.errors import DomainError
from paradoxlab.rng import SeededStream

# cos(pi/20)**20 evaluated independently with 50-digit arithmetic
SURVIVAL_N10 = 0.78054606978114017


def cfg_with(n, trials=1000, seed=101):
    return zeno.ZenoConfig(N=n, trials=trials, seed=seed)


class TestAnalyticLaw:
    def test_default_duration_sets_quarter_period(self):
        cfg = zeno.ZenoConfig()
        assert zeno.period(cfg, NATURAL) == pytest.approx(math.pi / 2.0, abs=1e-15)

    def test_landmark_values(self):
        assert zeno.survival_analytic(cfg_with(1)) == pytest.approx(0.0, abs=1e-12)
        assert zeno.survival_analytic(cfg_with(2)) == pytest.approx(0.25, abs=1e-12)
        assert zeno.survival_analytic(cfg_with(10)) == pytest.approx(
            SURVIVAL_N10, abs=1e-9
        )

    def test_freezing_limit(self):
        assert zeno.survival_analytic(cfg_with(10000)) >= 0.999

    def test_monotone_in_measurement_count(self):
        values = [zeno.survival_analytic(cfg_with(n)) for n in range(2, 1001)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_explicit_duration(self):
        cfg = zeno.ZenoConfig(B=2.0, T=0.3, N=4)
        expected = math.cos(2.0 * 0.3 / 4.0) ** 8
        assert zeno.survival_analytic(cfg) == pytest.approx(expected, abs=1e-15)


class TestRunZeno:
    def test_certain_flip_at_single_measurement(self):
        result = zeno.run_zeno(cfg_with(1, trials=5000))
        assert result.empirical_survival == 0.0
        assert abs(result.empirical_survival - result.analytic_survival) <= 1e-12

    def test_two_measurements_match_quarter(self):
        result = zeno.run_zeno(cfg_with(2, trials=50000))
        assert result.analytic_survival == pytest.approx(0.25, abs=1e-12)
        assert (
            abs(result.empirical_survival - 0.25) <= 3.0 * result.stderr
        )

    def test_per_step_probability(self):
        for n in (1, 2, 7):
            result = zeno.run_zeno(cfg_with(n, trials=10))
            expected = math.cos(math.pi / (2.0 * n)) ** 2
            assert result.per_step_probability == pytest.approx(expected, abs=1e-12)

    def test_jump_times_account_for_every_trial(self):
        result = zeno.run_zeno(cfg_with(5, trials=20000))
        survivors = round(result.empirical_survival * 20000)
        assert sum(result.jump_times) + survivors == 20000

    def test_matches_slow_projective_oracle(self):
        # replay the experiment through the generic measurement path
        n, trials = 3, 3000
        cfg = cfg_with(n, trials=trials, seed=7)
        dt = zeno.period(cfg, NATURAL) / n
        sx = qcore.spin_observable(qcore.SpinDirection(1.0, 0.0, 0.0))
        master = SeededStream(999)
        survived = 0
        for _ in range(trials):
            state = qcore.make_state((2,), (1.0, 1.0))
            outcomes = []
            for _ in range(n):
                state = qcore.evolve_spin(state, cfg.B, dt)
                value, state, _ = qcore.measure(state, sx, master)
                outcomes.append(value)
            survived += all(v > 0 for v in outcomes)
        oracle = survived / trials
        fast = zeno.run_zeno(cfg)
        analytic = zeno.survival_analytic(cfg)
        oracle_err = math.sqrt(oracle * (1 - oracle) / trials)
        assert abs(oracle - analytic) <= 3.0 * oracle_err
        assert abs(fast.empirical_survival - analytic) <= 3.0 * fast.stderr

    def test_first_step_premeasurement_state_phases(self):
        # state just before the first measurement carries exp(-+ i*mu*B*T/(N*hbar))
        cfg = cfg_with(4)
        dt = zeno.period(cfg, NATURAL) / cfg.N
        pre = qcore.evolve_spin(qcore.make_state((2,), (1.0, 1.0)), cfg.B, dt)
        theta = NATURAL.mu * cfg.B * dt / NATURAL.hbar
        explicit = np.array([np.exp(-1j * theta), np.exp(1j * theta)]) / math.sqrt(2.0)
        target = qcore.StateVector((2,), explicit)
        assert abs(abs(qcore.overlap(target, pre)) - 1.0) <= 1e-12


class TestDualZeno:
    def test_analytic_duality(self):
        for n in (1, 2, 5, 10, 50):
            cfg = cfg_with(n)
            assert zeno.run_dual_zeno(cfg).analytic_survival == zeno.run_zeno(
                cfg
            ).analytic_survival

    def test_two_measurements_match_quarter(self):
        result = zeno.run_dual_zeno(cfg_with(2, trials=50000, seed=55))
        assert result.analytic_survival == pytest.approx(0.25, abs=1e-12)
        assert abs(result.empirical_survival - 0.25) <= 3.0 * result.stderr

    def test_per_step_probability_same_law(self):
        for n in (2, 6):
            result = zeno.run_dual_zeno(cfg_with(n, trials=10))
            expected = math.cos(math.pi / (2.0 * n)) ** 2
            assert result.per_step_probability == pytest.approx(expected, abs=1e-12)

    def test_surviving_branch_ends_on_reversed_axis(self):
        # condition every measurement on +1: the final state must be the +1
        # eigenstate of the axis at angle 2*mu*B*T/hbar = pi, i.e. -x
        cfg = cfg_with(8)
        duration = zeno.period(cfg, NATURAL)
        state = qcore.make_state((2,), (1.0, 1.0))
        for step in range(cfg.N):
            angle = 2.0 * NATURAL.mu * cfg.B * (step + 1) * duration / (cfg.N * NATURAL.hbar)
            observable = qcore.spin_observable(qcore.xy_axis(angle))
            _, plus_projector = qcore.eigen_projectors(observable)[1]
            projected = plus_projector @ state.amplitudes
            state = qcore.StateVector((2,), projected / np.linalg.norm(projected))
        minus_x_plus_eigenstate = qcore.make_state((2,), (1.0, -1.0))
        assert abs(abs(qcore.overlap(minus_x_plus_eigenstate, state)) - 1.0) <= 1e-12

    def test_freezing_limit_empirical(self):
        result = zeno.run_dual_zeno(cfg_with(200, trials=2000, seed=77))
        assert result.analytic_survival > 0.98
        assert abs(result.empirical_survival - result.analytic_survival) <= max(
            3.0 * result.stderr, 1e-12
        )


class TestJumpResolution:
    def test_single_measurement_no_violation(self):
        report = zeno.jump_resolution_report(cfg_with(1))
        assert report.product == pytest.approx(math.pi, abs=1e-14)
        assert not report.apparent_violation

    def test_dense_schedule_violates(self):
        report = zeno.jump_resolution_report(cfg_with(10))
        assert report.product == pytest.approx(math.pi / 10.0, abs=1e-15)
        assert report.apparent_violation

    def test_threshold_is_half_hbar(self):
        for n in (1, 3, 20):
            assert zeno.jump_resolution_report(cfg_with(n)).threshold == 0.5

    def test_inputs_echoed(self):
        report = zeno.jump_resolution_report(cfg_with(4))
        assert report.delta_e == 2.0
        assert report.delta_t == pytest.approx(math.pi / 8.0, abs=1e-15)


class TestConfigValidation:
    def test_bad_counts(self):
        with pytest.raises(DomainError):
            zeno.ZenoConfig(N=0)
        with pytest.raises(DomainError):
            zeno.ZenoConfig(trials=0)

    def test_bad_field_and_duration(self):
        with pytest.raises(DomainError):
            zeno.ZenoConfig(B=0.0)
        with pytest.raises(DomainError):
            zeno.ZenoConfig(T=-1.0)

    def test_bad_seed(self):
        with pytest.raises(DomainError):
            zeno.ZenoConfig(seed=-5)
