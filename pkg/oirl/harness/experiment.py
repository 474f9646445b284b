"""The online inverse reinforcement learning loop.

:py:class:`.OnlineLearner` consumes demonstrator samples one at a time. For
every sample it

1. updates the integral regressors and offers an entry to the parameter
   history stack,
2. advances the parameter estimator by one step,
3. evaluates the parameter quality metric,
4. builds the sample's IRL rows and offers them to the IRL history stack,
   followed by any demonstrator queries due at this step,
5. runs the gated weight update and the purge rule, comparing the metric
   with the stack as it stood before step 4,

and records the results. :py:func:`run_experiment` feeds it from a live
simulation and :py:func:`replay_experiment` from a recorded trajectory; both
paths perform identical arithmetic.
"""

import logging
import time

import numpy as np

from oirl.dynamics import \
    BENCHMARK, Trajectory, benchmark_model, optimal_policy, iter_simulation, \
    num_samples

from oirl.sysid.estimator import \
    ParamStackEntry, ParamEstimatorState, stack_try_insert, is_full_rank, \
    estimator_step
from oirl.sysid.regressors import StreamingRegressors, StreamingEta

from oirl.irl.features import benchmark_features
from oirl.irl.rows import build_row
from oirl.irl.solve import WeightEstimate, ideal_weights
from oirl.irl.stack import IrlStack

from oirl.purging import \
    PurgePolicy, QueryRegion, ObservedRange, purge_step, query_demonstrator

from oirl.harness.config import InvalidConfigError, validate_config


logger = logging.getLogger(__name__.split(".")[-1])


class RunReport(object):
    """The results of an experiment.

    All series share the time grid ``t``.

    Attributes
    ----------
    t : :py:class:`numpy.ndarray`, shape (K,)
    theta_hat : :py:class:`numpy.ndarray`, shape (K, p, n)
        Parameter estimate after each step.
    theta_error : :py:class:`numpy.ndarray`, shape (K,)
        ``||theta_hat - theta||``.
    weights : :py:class:`numpy.ndarray`, shape (K, P + L + m - 1)
        Weight estimate in force after each step.
    weight_error : :py:class:`numpy.ndarray`, shape (K,)
        ``||W_hat - W||``.
    eta : :py:class:`numpy.ndarray`, shape (K,)
        Parameter quality metric.
    lambda_min_gram : :py:class:`numpy.ndarray`, shape (K,)
        Smallest eigenvalue of the parameter stack's Gram matrix.
    gain_eigenvalues : :py:class:`numpy.ndarray`, shape (K, 2)
        Smallest and largest eigenvalues of the estimator gain.
    solves : [:py:class:`~oirl.irl.solve.SolveRecord`, ...]
    purge_events : [:py:class:`~oirl.purging.PurgeEvent`, ...]
    final_theta : :py:class:`numpy.ndarray`, shape (p, n)
    final_weights : :py:class:`~oirl.irl.solve.WeightEstimate`
        The estimate of the last accepted solve (the initial guess if none
        was accepted).
    wall_time : float
        Seconds spent in the loop.
    config : :py:class:`~oirl.harness.config.ExperimentConfig`
    trajectory : :py:class:`~oirl.dynamics.Trajectory`
    """

    def __init__(self, **kwargs):
        for name, value in kwargs.items():
            setattr(self, name, value)

    @property
    def purge_count(self):
        return len(self.purge_events)


class OnlineLearner(object):
    """Per-run state of the online learning loop.

    Parameters
    ----------
    cfg : :py:class:`~oirl.harness.config.ExperimentConfig`
    capacity : int
        Number of samples which will be observed.
    spec : :py:class:`~oirl.dynamics.BenchmarkSpec`
        Ground truth used for the error series.
    demonstrator : callable ``x -> u``
        Policy answering queries.
    """

    def __init__(self, cfg, capacity, spec=BENCHMARK,
                 demonstrator=optimal_policy):
        self.cfg = cfg
        self.capacity = capacity
        self.demonstrator = demonstrator

        self.model = benchmark_model(spec)
        self.lib = benchmark_features()
        model = self.model
        p, n, m = model.p, model.n, model.m

        self.theta_true = model.theta_true
        self.w_true = ideal_weights(spec).as_vector()

        self.regressors = StreamingRegressors(model, cfg.Ts, cfg.tau1,
                                              cfg.tau2)
        self.metric = StreamingEta(model, cfg.Ts, cfg.T1)
        self.estimator = ParamEstimatorState(
            theta_hat=np.reshape(cfg.theta0, (p, n)),
            Gamma=cfg.Gamma0_scale * np.eye(p),
            M=cfg.M, k_theta=cfg.k_theta, beta1=cfg.beta1,
            c_lower=cfg.c_lower)

        self.stack = IrlStack.for_features(self.lib, cfg.N, cfg.xi1, cfg.xi2,
                                           cfg.r1)
        self.W0 = WeightEstimate.from_vector(cfg.W0, self.lib.P, self.lib.L,
                                             cfg.r1)
        self.policy = PurgePolicy(cfg.kappa1_lower, cfg.kappa2_lower,
                                  cfg.purge_mode, cfg.epsilon_time, self.W0)
        self.W = self.W0

        self.random = np.random.RandomState(cfg.seed)
        self.query_region = ObservedRange
        self.query_every = int(round(cfg.query_interval / cfg.Ts))
        self._observed_lower = None
        self._observed_upper = None

        self.solves = []
        self.purge_events = []
        self._full_rank = False

        K = capacity
        self.t = np.zeros(K)
        self.x = np.zeros((K, 2 * n))
        self.u = np.zeros((K, m))
        self.theta_hat = np.zeros((K, p, n))
        self.theta_error = np.zeros(K)
        self.weights = np.zeros((K, self.lib.width))
        self.weight_error = np.zeros(K)
        self.eta = np.zeros(K)
        self.lambda_min_gram = np.zeros(K)
        self.gain_eigenvalues = np.zeros((K, 2))
        self.count = 0

    def _region(self):
        if self.query_region is ObservedRange:
            return QueryRegion.around(self._observed_lower,
                                      self._observed_upper,
                                      self.cfg.query_inflation)
        return self.query_region

    def _offer(self, sample, theta_hat, eta):
        row = build_row(sample.x, sample.u, theta_hat, eta, self.lib,
                        self.model, self.cfg.r1, sample.t)
        return self.stack.try_insert(row)

    def observe(self, sample):
        """Process the next :py:class:`~oirl.dynamics.TrajectorySample`."""
        k = self.count
        if k >= self.capacity:
            raise ValueError("more samples than the configured capacity")
        model = self.model
        t = sample.t

        f_known = model.f_known(sample.x, sample.u)
        basis = model.basis_theta(sample.x, sample.u)

        if self._observed_lower is None:
            self._observed_lower = np.array(sample.x, dtype=float)
            self._observed_upper = np.array(sample.x, dtype=float)
        else:
            np.minimum(self._observed_lower, sample.x,
                       out=self._observed_lower)
            np.maximum(self._observed_upper, sample.x,
                       out=self._observed_upper)

        # Parameter estimation
        regressors = self.regressors.push(sample, f_known, basis)
        if self.regressors.ready:
            stack_try_insert(self.estimator,
                             ParamStackEntry.from_regressors(regressors))
            if not self._full_rank and is_full_rank(self.estimator):
                self._full_rank = True
                logger.info("Parameter stack full rank at t=%.3f s", t)
        estimator_step(self.estimator, self.cfg.Ts)
        theta_hat = self.estimator.theta_hat.copy()

        eta = self.metric.push(sample, theta_hat, f_known, basis)

        # IRL data selection, then any queries due at this step. The purge
        # rule compares against the stack as it was before these offers.
        eta_bar = self.stack.eta_bar()
        self._offer(sample, theta_hat, eta)
        if self.cfg.query_count and k % self.query_every == 0:
            region = self._region()
            for x_query in region.sample(self.random, self.cfg.query_count):
                query = query_demonstrator(x_query, self.demonstrator, t,
                                           region)
                self._offer(query, theta_hat, eta)

        self.stack, self.W, _ = purge_step(
            self.stack, self.policy, eta, t, self.W,
            on_solve=self.solves.append,
            on_purge=self.purge_events.append, eta_bar=eta_bar)

        # Record
        self.t[k] = t
        self.x[k] = sample.x
        self.u[k] = sample.u
        self.theta_hat[k] = theta_hat
        self.theta_error[k] = np.linalg.norm(theta_hat - self.theta_true)
        w = self.W.as_vector()
        self.weights[k] = w
        self.weight_error[k] = np.linalg.norm(w - self.w_true)
        self.eta[k] = eta
        self.lambda_min_gram[k] = self.estimator.min_gram_eigenvalue()
        self.gain_eigenvalues[k] = self.estimator.gain_eigenvalues()
        self.count += 1

        if k % 1000 == 0:
            logger.debug("t=%.3f s: theta error %g, weight error %g, "
                         "%d purges", t, self.theta_error[k],
                         self.weight_error[k], self.stack.s)

    def report(self, wall_time=0.0):
        """Assemble the :py:class:`.RunReport` of the samples seen so far."""
        K = self.count
        return RunReport(
            t=self.t[:K].copy(),
            theta_hat=self.theta_hat[:K].copy(),
            theta_error=self.theta_error[:K].copy(),
            weights=self.weights[:K].copy(),
            weight_error=self.weight_error[:K].copy(),
            eta=self.eta[:K].copy(),
            lambda_min_gram=self.lambda_min_gram[:K].copy(),
            gain_eigenvalues=self.gain_eigenvalues[:K].copy(),
            solves=list(self.solves),
            purge_events=list(self.purge_events),
            final_theta=self.estimator.theta_hat.copy(),
            final_weights=self.W,
            wall_time=wall_time,
            config=self.cfg,
            trajectory=Trajectory(self.t[:K], self.x[:K], self.u[:K],
                                  Ts=self.cfg.Ts))


def _run(learner, samples):
    cfg = learner.cfg
    logger.info("Starting experiment: Ts=%g s, T_end=%g s, x0=%s, "
                "purge mode %s", cfg.Ts, cfg.T_end, cfg.x0,
                cfg.purge_mode.value)
    start = time.time()
    for sample in samples:
        learner.observe(sample)
    wall_time = time.time() - start

    report = learner.report(wall_time)
    logger.info("Experiment finished in %.2f s: theta error %g, "
                "weight error %g, %d purges, %d solves", wall_time,
                report.theta_error[-1], report.weight_error[-1],
                report.purge_count, len(report.solves))
    return report


def run_experiment(cfg):
    """Run the online learning loop against a live simulation of the
    benchmark demonstrator.

    Parameters
    ----------
    cfg : :py:class:`~oirl.harness.config.ExperimentConfig`

    Returns
    -------
    :py:class:`.RunReport`

    Raises
    ------
    InvalidConfigError
        If the configuration is invalid.
    DivergenceError
        If the simulation diverges.
    GainDivergenceError
        If the estimator gain loses positive definiteness.
    """
    validate_config(cfg)
    learner = OnlineLearner(cfg, num_samples(cfg.Ts, cfg.T_end))
    samples = iter_simulation(learner.model, optimal_policy, cfg.x0, cfg.Ts,
                              cfg.T_end)
    return _run(learner, samples)


def replay_experiment(traj, cfg):
    """Run the online learning loop over a recorded trajectory.

    The configuration's Ts must match the trajectory's sample spacing. The
    horizon and initial state are taken from the trajectory.

    Parameters
    ----------
    traj : :py:class:`~oirl.dynamics.Trajectory`
    cfg : :py:class:`~oirl.harness.config.ExperimentConfig`

    Returns
    -------
    :py:class:`.RunReport`
    """
    if traj.n != 1 or traj.m != 1:
        raise InvalidConfigError(
            "trajectory dimensions do not match the benchmark system")
    if len(traj) < 2:
        raise InvalidConfigError("trajectory must hold at least two samples")
    if abs(traj.Ts - cfg.Ts) > 1e-9 * cfg.Ts:
        raise InvalidConfigError(
            "trajectory spacing {!r} s does not match".format(traj.Ts),
            "simulation", "Ts")
    cfg = cfg._replace(T_end=(len(traj) - 1) * cfg.Ts,
                       x0=tuple(float(v) for v in traj.x[0]))
    validate_config(cfg)
    learner = OnlineLearner(cfg, len(traj))
    return _run(learner, iter(traj))
