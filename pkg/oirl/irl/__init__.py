"""Inverse Bellman error regression and least-squares weight recovery."""

from oirl.irl.features import FeatureLibrary, benchmark_features

from oirl.irl.rows import IrlRow, inverse_bellman_error, build_row

from oirl.irl.stack import IrlStack, stack_try_insert, NeverPurged

from oirl.irl.solve import \
    WeightEstimate, SolveRecord, solve_weights, ideal_weights

from oirl.irl.exceptions import RankConditionError, DegenerateRhsError
