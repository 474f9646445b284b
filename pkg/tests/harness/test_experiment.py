import pytest

import numpy as np

import mock

from oirl.dynamics import Trajectory, TrajectorySample
from oirl.harness.config import DEFAULT_CONFIG, InvalidConfigError
from oirl.harness.experiment import \
    OnlineLearner, RunReport, run_experiment, replay_experiment
from oirl.purging import purge_step


SERIES = ("t", "theta_hat", "theta_error", "weights", "weight_error", "eta",
          "lambda_min_gram", "gain_eigenvalues")


def assert_same_run(a, b):
    for name in SERIES:
        assert np.array_equal(getattr(a, name), getattr(b, name)), name
    assert a.solves == b.solves
    assert a.purge_events == b.purge_events
    assert np.array_equal(a.final_theta, b.final_theta)
    assert a.final_weights == b.final_weights


class TestShortRun(object):

    def test_report_shape(self, short_report, short_config):
        r = short_report
        assert isinstance(r, RunReport)
        K = 601
        assert r.t.shape == (K, )
        assert r.theta_hat.shape == (K, 3, 1)
        assert r.weights.shape == (K, 5)
        assert r.gain_eigenvalues.shape == (K, 2)
        assert len(r.trajectory) == K
        assert r.config == short_config
        assert r.wall_time >= 0.0
        assert r.purge_count == len(r.purge_events)

    def test_eta_infinite_before_first_window(self, short_report):
        r = short_report
        assert np.all(np.isinf(r.eta[r.t < 1.0 - 1e-9]))
        assert np.all(np.isfinite(r.eta[r.t > 1.0 + 1e-9]))

    def test_weights_held_at_initial_guess(self, short_report):
        r = short_report
        first_solve = r.solves[0].t if r.solves else float("inf")
        assert not np.any(r.weights[r.t < first_solve])

    def test_weights_change_only_on_solves(self, short_report):
        r = short_report
        solve_times = set(s.t for s in r.solves)
        for k in range(1, len(r.t)):
            if not np.array_equal(r.weights[k], r.weights[k - 1]):
                assert r.t[k] in solve_times

    def test_deterministic(self, short_report, short_config):
        assert_same_run(short_report, run_experiment(short_config))

    def test_replay_matches_live_run(self, short_report, short_config):
        assert_same_run(short_report,
                        replay_experiment(short_report.trajectory,
                                          short_config))

    def test_no_queries(self, short_config):
        r = run_experiment(short_config._replace(query_count=0, T_end=2.0))
        assert len(r.t) == 401

    def test_purge_compares_against_stack_before_step(self, short_report,
                                                      short_config):
        learner = OnlineLearner(short_config, len(short_report.trajectory))
        expected = []
        with mock.patch("oirl.harness.experiment.purge_step",
                        wraps=purge_step) as step:
            for sample in short_report.trajectory:
                expected.append(learner.stack.eta_bar())
                learner.observe(sample)
        assert [c[1]["eta_bar"] for c in step.call_args_list] == expected
        assert_same_run(learner.report(), short_report)

    def test_windows_longer_than_run(self):
        # The regressors never become available so nothing is learned
        cfg = DEFAULT_CONFIG._replace(T_end=1.2)
        r = run_experiment(cfg)
        assert np.all(r.lambda_min_gram == 0.0)
        assert np.array_equal(r.final_theta, np.zeros((3, 1)))
        assert np.allclose(r.theta_error, np.linalg.norm([1.0, 2.5, 4.0]))


class TestReplayValidation(object):

    def test_wrong_spacing(self, short_report):
        with pytest.raises(InvalidConfigError) as exc_info:
            replay_experiment(short_report.trajectory,
                              DEFAULT_CONFIG._replace(Ts=0.01))
        assert exc_info.value.key == "Ts"

    def test_wrong_dimensions(self):
        traj = Trajectory([0.0, 0.005], np.zeros((2, 4)), np.zeros((2, 1)))
        with pytest.raises(InvalidConfigError):
            replay_experiment(traj, DEFAULT_CONFIG)

    def test_too_short(self):
        traj = Trajectory([0.0], np.zeros((1, 2)), np.zeros((1, 1)),
                          Ts=0.005)
        with pytest.raises(InvalidConfigError):
            replay_experiment(traj, DEFAULT_CONFIG)


def test_learner_capacity():
    learner = OnlineLearner(DEFAULT_CONFIG._replace(query_count=0), 1)
    learner.observe(TrajectorySample(0.0, np.array([1.0, 1.0]),
                                     np.array([-3.0])))
    with pytest.raises(ValueError):
        learner.observe(TrajectorySample(0.005, np.array([1.0, 1.0]),
                                         np.array([-3.0])))
    assert learner.report().t.tolist() == [0.0]


@pytest.mark.slow
class TestBenchmarkRun(object):

    def test_converges(self, default_report):
        r = default_report
        assert r.theta_error[-1] < 1e-2
        assert r.weight_error[-1] < 1e-2
        assert r.solves
        assert np.allclose(r.final_weights.as_vector(), r.weights[-1])

    def test_gain_bounds(self, default_report):
        gains = default_report.gain_eigenvalues
        assert np.all(gains >= 1e-6)
        assert np.all(gains <= 1e6)

    def test_purges(self, default_report):
        events = default_report.purge_events
        assert events
        assert [e.s for e in events] == list(range(1, len(events) + 1))
        eta_bars = [e.eta_bar for e in events]
        assert all(b < a for a, b in zip(eta_bars, eta_bars[1:]))

    def test_purge_beats_eta_bar(self, default_report):
        r = default_report
        for event in r.purge_events:
            k = int(np.argmin(np.abs(r.t - event.t)))
            assert r.eta[k] < event.eta_bar

    def test_theta_error_falls(self, default_report):
        error = default_report.theta_error
        assert error[-1] < 0.01 * error[0]

    def test_purges_continue_as_estimate_improves(self, default_report):
        # Rows built while theta_hat was still poor must be flushed
        assert default_report.purge_events[-1].t > 10.0

    def test_runtime_budget(self, default_report):
        assert default_report.wall_time < 10.0
