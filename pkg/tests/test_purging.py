import pytest

import numpy as np

from mock import Mock

from oirl.dynamics import optimal_policy
from oirl.irl.rows import IrlRow, build_row
from oirl.irl.solve import WeightEstimate, SolveRecord
from oirl.irl.stack import IrlStack, NeverPurged
from oirl.purging import \
    PurgeMode, PurgePolicy, PurgeEvent, purge_step, ObservedRange, \
    QueryRegion, query_demonstrator


W0 = WeightEstimate(W_V=(0.0, ), W_Q=(0.0, ), W_R_minus=(), r1=1.0)


def make_row(eta, rhs=(1.0, 1.0), scale=1.0):
    """A well conditioned row of a stack with two unknown weights."""
    return IrlRow(np.array([scale, 0.0]), np.array([[0.0, 1.0]]),
                  np.array(rhs, dtype=float), 0.0, eta)


def full_stack(etas=(0.5, 0.3), rhs=(1.0, 1.0)):
    stack = IrlStack(len(etas), P=1, L=1, m=1, xi1=1.0, xi2=1e-6, r1=1.0)
    for eta in etas:
        stack.try_insert(make_row(eta, rhs))
    return stack


@pytest.fixture
def policy():
    return PurgePolicy(kappa1_lower=1e6, kappa2_lower=1e6, W0=W0)


class TestPurgePolicy(object):

    def test_defaults(self, policy):
        assert policy.mode is PurgeMode.metric
        assert policy.epsilon_time == 2.0
        assert policy.W0 is W0

    def test_mode_from_string(self):
        assert PurgePolicy(1e6, 1e6, "time").mode is PurgeMode.time

    @pytest.mark.parametrize("args", [(0.0, 1e6), (1e6, -1.0),
                                      (1e6, 1e6, "sometimes"),
                                      (1e6, 1e6, "time", 0.0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            PurgePolicy(*args)

    def test_mode_docstring(self):
        assert "metric = 'metric'" in PurgeMode.__doc__


class TestPurgeStep(object):

    def test_empty_stack(self, policy):
        stack = IrlStack(2, 1, 1, 1, 1.0, 1e-6, 1.0)
        stack, W, purged = purge_step(stack, policy, float("inf"), 0.0, W0)
        assert W is W0
        assert not purged
        assert stack.s == 0

    def test_partially_full_stack_holds(self, policy):
        stack = IrlStack(2, 1, 1, 1, 1.0, 1e-6, 1.0)
        stack.try_insert(make_row(0.5))
        stack, W, purged = purge_step(stack, policy, 0.0, 1.0, W0)
        assert W is W0
        assert not purged
        assert len(stack) == 1

    def test_solve_and_purge(self, policy):
        stack = full_stack()
        on_solve = Mock()
        on_purge = Mock()
        stack, W, purged = purge_step(stack, policy, 0.1, 3.0, W0,
                                      on_solve=on_solve, on_purge=on_purge)

        # Sigma = [[1, 0], [0, 1]] twice with every rhs entry 1
        assert np.allclose(W.as_vector(), [-1.0, -1.0])
        assert purged
        assert len(stack) == 0
        assert stack.s == 1
        assert stack.last_purge_time == 3.0

        record = on_solve.call_args[0][0]
        assert isinstance(record, SolveRecord)
        assert record.t == 3.0
        on_purge.assert_called_once_with(PurgeEvent(3.0, 1, 0.3, 1.0))

    def test_eta_equal_to_eta_bar(self, policy):
        stack = full_stack()
        stack, W, purged = purge_step(stack, policy, 0.3, 3.0, W0)
        assert not purged
        assert len(stack) == 2
        assert stack.s == 0
        # The solve still happened
        assert W is not W0

    def test_eta_bar_from_before_insertions(self, policy):
        # The second row was offered at this step and carries eta_now
        stack = full_stack(etas=(0.5, 0.2))
        assert not purge_step(full_stack(etas=(0.5, 0.2)), policy, 0.2, 3.0,
                              W0)[2]

        on_purge = Mock()
        stack, W, purged = purge_step(stack, policy, 0.2, 3.0, W0,
                                      on_purge=on_purge, eta_bar=0.3)
        assert purged
        assert stack.eta_floor == 0.2
        on_purge.assert_called_once_with(PurgeEvent(3.0, 1, 0.3, 1.0))

    def test_infinite_eta_never_purges(self, policy):
        stack = full_stack()
        stack, W, purged = purge_step(stack, policy, float("inf"), 3.0, W0)
        assert not purged

    def test_ill_conditioned_holds(self):
        policy = PurgePolicy(kappa1_lower=1e6, kappa2_lower=1e6, W0=W0)
        stack = IrlStack(2, 1, 1, 1, 1.0, 1e-6, 1.0)
        stack.try_insert(make_row(0.5, scale=1e-4))
        stack.try_insert(make_row(0.3, scale=1e-4))
        assert stack.condition_number() > 1e6
        stack, W, purged = purge_step(stack, policy, 0.1, 3.0, W0)
        assert W is W0
        assert not purged

    def test_rejected_insertion_holds(self, policy):
        stack = full_stack()
        stack.varpi = 0
        W_prev = WeightEstimate((2.0, ), (3.0, ), (), 1.0)
        stack, W, purged = purge_step(stack, policy, 0.1, 3.0, W_prev)
        assert W is W_prev
        assert purged

    def test_solve_failure_holds(self, policy):
        stack = full_stack(rhs=(0.0, 0.0))
        on_purge = Mock()
        stack, W, purged = purge_step(stack, policy, 0.01, 3.0, W0,
                                      on_purge=on_purge)
        assert W is W0
        assert not purged
        assert len(stack) == 2
        assert not on_purge.called

    def test_weights_survive_purge(self, policy):
        stack = full_stack()
        stack, W, purged = purge_step(stack, policy, 0.1, 3.0, W0)
        assert purged
        stack.try_insert(make_row(0.05))
        stack, W_next, purged = purge_step(stack, policy, 0.01, 3.1, W)
        assert W_next is W

    def test_purge_monotonicity(self, policy):
        stack = full_stack()
        events = []
        for t, eta in enumerate([0.2, 0.25, 0.1, 0.15, 0.05]):
            stack, _, _ = purge_step(stack, policy, eta, float(t), W0,
                                     on_purge=events.append)
            while not stack.is_full():
                stack.try_insert(make_row(1.0))
        assert [e.eta_bar for e in events] == [0.3, 0.2, 0.1]
        assert [e.s for e in events] == [1, 2, 3]
        assert stack.s == 3

    def test_time_mode(self):
        policy = PurgePolicy(1e6, 1e6, PurgeMode.time, epsilon_time=2.0,
                             W0=W0)
        stack = full_stack()
        assert stack.last_purge_time is NeverPurged

        stack, _, purged = purge_step(stack, policy, float("inf"), 2.0, W0)
        assert not purged
        stack, _, purged = purge_step(stack, policy, float("inf"), 2.5, W0)
        assert purged
        assert stack.last_purge_time == 2.5

        for t in (3.0, 4.5):
            while not stack.is_full():
                stack.try_insert(make_row(1.0))
            stack, _, purged = purge_step(stack, policy, 0.0, t, W0)
            assert not purged
        stack, _, purged = purge_step(stack, policy, 0.0, 4.6, W0)
        assert purged
        assert stack.s == 2


class TestQueryRegion(object):

    def test_around(self):
        region = QueryRegion.around([0.0, -1.0], [1.0, 1.0], inflation=0.2)
        assert region.lower == pytest.approx((-0.1, -1.2))
        assert region.upper == pytest.approx((1.1, 1.2))

    def test_covering(self):
        region = QueryRegion.covering([[0.0, 1.0], [2.0, -1.0]],
                                      inflation=0.0)
        assert region == QueryRegion((0.0, -1.0), (2.0, 1.0))

    def test_contains(self):
        region = QueryRegion((-2.0, -2.0), (2.0, 2.0))
        assert region.contains([0.0, 2.0])
        assert not region.contains([0.0, 2.1])

    def test_sample(self):
        region = QueryRegion((-2.0, 0.0), (2.0, 1.0))
        states = region.sample(np.random.RandomState(0), 100)
        assert states.shape == (100, 2)
        assert all(region.contains(x) for x in states)

    def test_invalid(self):
        with pytest.raises(ValueError):
            QueryRegion((1.0, 0.0), (0.0, 1.0))

    def test_observed_range_sentinel(self):
        assert "ObservedRange" in repr(ObservedRange)


class TestQueryDemonstrator(object):

    @pytest.mark.parametrize("x,u", [((0.0, 0.0), 0.0), ((0.0, 1.0), -3.0)])
    def test_benchmark(self, x, u):
        sample = query_demonstrator(x, optimal_policy, t=1.5)
        assert sample.t == 1.5
        assert list(sample.x) == list(x)
        assert list(sample.u) == pytest.approx([u])

    def test_outside_region(self):
        region = QueryRegion((-1.0, -1.0), (1.0, 1.0))
        with pytest.raises(ValueError):
            query_demonstrator((0.0, 1.5), optimal_policy, region=region)

    def test_queries_fill_full_rank_stack(self, model, lib):
        region = QueryRegion((-2.0, -2.0), (2.0, 2.0))
        stack = IrlStack.for_features(lib, N=5, xi1=1.0, xi2=1e-6, r1=1.0)
        for x in region.sample(np.random.RandomState(0), 20):
            sample = query_demonstrator(x, optimal_policy, region=region)
            stack.try_insert(build_row(sample.x, sample.u, model.theta_true,
                                       0.0, lib, model, 1.0))
        Sigma, _ = stack.matrices()
        assert stack.is_full()
        assert np.linalg.matrix_rank(Sigma) == 5
