"""Experiment orchestration: configuration, the online learning loop,
trajectory files and result export."""

from oirl.harness.config import \
    ExperimentConfig, DEFAULT_CONFIG, load_config, validate_config, \
    InvalidConfigError

from oirl.harness.trajectory_io import \
    ingest_trajectory, export_trajectory, ingest_states, TrajectoryParseError

from oirl.harness.experiment import \
    OnlineLearner, RunReport, run_experiment, replay_experiment

from oirl.harness.report import export_report
