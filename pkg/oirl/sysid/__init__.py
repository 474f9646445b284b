"""Derivative-free identification of the unknown dynamics parameters.

The observed trajectory is converted into integral regressors which are fed
to a concurrent-learning estimator with a curated history stack.
"""

from oirl.sysid.regressors import \
    IntegralRegressors, integral_regressors, eval_eta, \
    StreamingDoubleIntegral, StreamingWindowIntegral, StreamingRegressors, \
    StreamingEta

from oirl.sysid.estimator import \
    ParamStackEntry, ParamEstimatorState, stack_try_insert, is_full_rank, \
    estimator_step

from oirl.sysid.exceptions import \
    InsufficientHistoryError, GainDivergenceError
