import pytest

import numpy as np

from oirl.dynamics import BENCHMARK
from oirl.irl.exceptions import RankConditionError, DegenerateRhsError
from oirl.irl.rows import build_row
from oirl.irl.solve import \
    WeightEstimate, SolveRecord, ideal_weights, solve_weights
from oirl.irl.stack import IrlStack


TRUE_UNKNOWN = np.array([np.pi / 2.0, 1.0, 1.0, 0.0, 1.0])


def build_stack(lib, model, samples, theta_hat, N=None):
    samples = list(samples)
    stack = IrlStack.for_features(lib, N=N or len(samples), xi1=1.0,
                                  xi2=1e-6, r1=1.0)
    for sample in samples:
        stack.try_insert(build_row(sample.x, sample.u, theta_hat, 0.0, lib,
                                   model, 1.0, sample.t))
    return stack


@pytest.fixture(scope="module")
def samples(benchmark_trajectory):
    traj = benchmark_trajectory
    return [traj[k] for k in range(0, len(traj), 25)]


class TestWeightEstimate(object):

    def test_vectors(self):
        w = WeightEstimate.from_vector([1, 2, 3, 4, 5, 6], P=3, L=2, r1=0.5)
        assert w.W_V == (1.0, 2.0, 3.0)
        assert w.W_Q == (4.0, 5.0)
        assert w.W_R_minus == (6.0, )
        assert w.r1 == 0.5
        assert list(w.as_vector()) == [1, 2, 3, 4, 5, 6]
        assert list(w.full_vector()) == [1, 2, 3, 4, 5, 0.5, 6]

    def test_ideal_weights(self):
        w = ideal_weights(BENCHMARK)
        assert np.allclose(w.as_vector(), TRUE_UNKNOWN)
        assert w.W_R_minus == ()
        assert w.r1 == 1.0


class TestSolveWeights(object):

    def test_exact(self, lib, model, samples):
        stack = build_stack(lib, model, samples, model.theta_true)
        w = solve_weights(stack)
        assert isinstance(w, WeightEstimate)
        assert np.allclose(w.as_vector(), TRUE_UNKNOWN, rtol=0.0, atol=1e-6)
        assert w.r1 == 1.0

    def test_diagnostics(self, lib, model, samples):
        stack = build_stack(lib, model, samples, model.theta_true)
        record = solve_weights(stack, return_diagnostics=True)
        assert isinstance(record, SolveRecord)
        assert record.t is None
        assert record.kappa == stack.condition_number()
        assert record.residual_norm < 1e-8
        assert np.allclose(record.weights.as_vector(), TRUE_UNKNOWN,
                           rtol=0.0, atol=1e-6)

    def test_identical_rows(self, lib, model, samples):
        stack = build_stack(lib, model, [samples[10]] * 10,
                            model.theta_true)
        with pytest.raises(RankConditionError) as exc_info:
            solve_weights(stack)
        assert exc_info.value.rank == 2
        assert exc_info.value.required == 5
        assert "rank 2" in str(exc_info.value)

    def test_too_few_rows(self, lib, model, samples):
        stack = build_stack(lib, model, samples[10:12], model.theta_true)
        with pytest.raises(RankConditionError) as exc_info:
            solve_weights(stack)
        assert exc_info.value.rank == 4

    def test_degenerate_rhs(self, lib, model):
        # Zero velocity gives zero control and so a zero right-hand side
        stack = IrlStack.for_features(lib, N=8, xi1=1.0, xi2=1e-6, r1=1.0)
        for x1 in np.linspace(-2.0, 2.0, 8):
            stack.try_insert(build_row([x1, 0.0], [0.0], model.theta_true,
                                       0.0, lib, model, 1.0))
        with pytest.raises(DegenerateRhsError) as exc_info:
            solve_weights(stack)
        assert exc_info.value.norm == 0.0
        assert exc_info.value.floor == 1e-6

    def test_sensitivity(self, lib, model, samples):
        direction = np.array([[1.0], [-1.0], [1.0]]) / np.sqrt(3.0)
        slopes = []
        for delta in (1e-1, 1e-2, 1e-3):
            theta_hat = model.theta_true + delta * direction
            w = solve_weights(build_stack(lib, model, samples, theta_hat))
            error = np.linalg.norm(w.as_vector() - TRUE_UNKNOWN)
            assert error > 0.0
            slopes.append(error / delta)
        # Linear in the parameter error
        for a, b in zip(slopes, slopes[1:]):
            assert 1.0 / 3.0 <= b / a <= 3.0
