import pytest

from oirl.dynamics import benchmark_model, optimal_policy, simulate

from oirl.irl.features import benchmark_features

from oirl.harness.config import DEFAULT_CONFIG
from oirl.harness.experiment import run_experiment


@pytest.fixture(scope="session")
def model():
    return benchmark_model()


@pytest.fixture(scope="session")
def lib():
    return benchmark_features()


@pytest.fixture(scope="session")
def benchmark_trajectory(model):
    """The benchmark demonstrator from (1, 1) for ten seconds."""
    return simulate(model, optimal_policy, (1.0, 1.0), 0.005, 10.0)


@pytest.fixture(scope="session")
def short_config():
    """The default experiment cut down to three seconds."""
    return DEFAULT_CONFIG._replace(T_end=3.0)


@pytest.fixture(scope="session")
def short_report(short_config):
    return run_experiment(short_config)


@pytest.fixture(scope="session")
def default_report():
    """The default experiment, run once per test session."""
    return run_experiment(DEFAULT_CONFIG)


def pytest_addoption(parser):
    parser.addoption("--skip-slow", action="store_true", default=False,
                     help="Skip tests which run complete experiments.")


def pytest_runtest_setup(item):  # pragma: no cover
    if ("slow" in item.keywords and
            item.config.getoption("--skip-slow")):
        pytest.skip("--skip-slow given")
