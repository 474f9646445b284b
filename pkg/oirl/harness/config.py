"""Experiment configuration.

Configurations are plain :py:class:`.ExperimentConfig` named tuples. Files use
an INI layout with one section per concern, for example::

    [simulation]
    Ts = 0.005
    T_end = 30
    x0 = 1.0, 1.0

    [purging]
    purge_mode = time
    epsilon_time = 2.5

Every key is optional and defaults to :py:data:`.DEFAULT_CONFIG`.
"""

import collections
import io
import math

from six import iteritems
from six.moves import configparser

from oirl.purging import PurgeMode


class InvalidConfigError(Exception):
    """Raised when a configuration is malformed or violates a constraint.

    Attributes
    ----------
    message : str
    section : str or None
    key : str or None
    """

    def __init__(self, message, section=None, key=None):
        self.message = message
        self.section = section
        self.key = key

    def __str__(self):
        if self.key is not None:
            return "[{}] {}: {}".format(self.section, self.key, self.message)
        elif self.section is not None:
            return "[{}]: {}".format(self.section, self.message)
        else:
            return self.message


class ExperimentConfig(collections.namedtuple("ExperimentConfig", [
        # [simulation]
        "Ts", "T_end", "x0",
        # [sysid]
        "tau1", "tau2", "k_theta", "beta1", "Gamma0_scale", "M", "c_lower",
        "theta0",
        # [irl]
        "N", "xi1", "xi2", "r1", "W0",
        # [purging]
        "purge_mode", "T1", "kappa1_lower", "kappa2_lower", "epsilon_time",
        # [query]
        "query_count", "query_interval", "query_inflation", "seed"])):
    """Parameters of an online IRL experiment on the benchmark system.

    Parameters
    ----------
    Ts : float
        Simulation and estimator step (seconds).
    T_end : float
        Horizon (seconds), an integer multiple of Ts.
    x0 : (float, float)
        Initial state.
    tau1, tau2 : float
        Windows of the integral regressors (seconds).
    k_theta, beta1 : float
        Estimator adaptation and forgetting gains.
    Gamma0_scale : float
        The initial estimator gain is this multiple of the identity.
    M : int
        Parameter history stack capacity.
    c_lower : float
        Full-rank threshold of the parameter history stack.
    theta0 : (float, ...)
        Initial parameter estimate.
    N : int
        IRL history stack capacity (samples).
    xi1, xi2 : float
        Condition-improvement factor and right-hand side floor of the IRL
        data selection.
    r1 : float
        Fixed first control weight.
    W0 : (float, ...)
        Initial weight estimate.
    purge_mode : :py:class:`~oirl.purging.PurgeMode`
    T1 : float
        Window of the parameter quality metric (seconds).
    kappa1_lower, kappa2_lower : float
        Condition number gates of the weight update and the metric purge.
    epsilon_time : float
        Purge interval in time mode (seconds).
    query_count : int
        Demonstrator queries per query interval (0 disables queries).
    query_interval : float
        Time between query batches (seconds), a multiple of Ts.
    query_inflation : float
        Fractional widening of the observed state range used as the query
        region.
    seed : int
        Seed of the query state generator.
    """


DEFAULT_CONFIG = ExperimentConfig(
    Ts=0.005, T_end=30.0, x0=(1.0, 1.0),
    tau1=1.0, tau2=0.6, k_theta=0.5 / 150, beta1=1.0, Gamma0_scale=1.0,
    M=100, c_lower=1e-6, theta0=(0.0, 0.0, 0.0),
    N=150, xi1=1.0, xi2=1e-6, r1=1.0, W0=(0.0, 0.0, 0.0, 0.0, 0.0),
    purge_mode=PurgeMode.metric, T1=1.0, kappa1_lower=1e6,
    kappa2_lower=1e6, epsilon_time=2.0,
    query_count=1, query_interval=0.005, query_inflation=0.2, seed=0)
"""The benchmark experiment."""


def _parse_float(text):
    return float(text)


def _parse_int(text):
    return int(text)


def _parse_vector(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


_SECTIONS = collections.OrderedDict([
    ("simulation", [("Ts", _parse_float), ("T_end", _parse_float),
                    ("x0", _parse_vector)]),
    ("sysid", [("tau1", _parse_float), ("tau2", _parse_float),
               ("k_theta", _parse_float), ("beta1", _parse_float),
               ("Gamma0_scale", _parse_float), ("M", _parse_int),
               ("c_lower", _parse_float), ("theta0", _parse_vector)]),
    ("irl", [("N", _parse_int), ("xi1", _parse_float),
             ("xi2", _parse_float), ("r1", _parse_float),
             ("W0", _parse_vector)]),
    ("purging", [("purge_mode", PurgeMode), ("T1", _parse_float),
                 ("kappa1_lower", _parse_float),
                 ("kappa2_lower", _parse_float),
                 ("epsilon_time", _parse_float)]),
    ("query", [("query_count", _parse_int),
               ("query_interval", _parse_float),
               ("query_inflation", _parse_float), ("seed", _parse_int)]),
])
"""Section and parser of every configuration field."""

_FIELD_SECTIONS = {field: section
                   for section, fields in iteritems(_SECTIONS)
                   for field, _ in fields}


def _is_multiple(value, Ts):
    steps = value / Ts
    return abs(steps - round(steps)) <= 1e-9 * max(1.0, steps)


def validate_config(cfg):
    """Check a configuration, returning it unchanged.

    Raises
    ------
    InvalidConfigError
        Naming the first offending field.
    """
    def fail(field, message):
        raise InvalidConfigError(message, _FIELD_SECTIONS[field], field)

    for field in ("Ts", "T_end", "tau1", "tau2", "T1", "k_theta", "beta1",
                  "Gamma0_scale", "c_lower", "xi2", "r1", "kappa1_lower",
                  "kappa2_lower", "query_interval"):
        value = getattr(cfg, field)
        if not (math.isfinite(value) and value > 0.0):
            fail(field, "must be positive and finite")
    if cfg.xi1 < 0.0:
        fail("xi1", "must not be negative")
    if cfg.query_inflation < 0.0:
        fail("query_inflation", "must not be negative")
    if cfg.query_count < 0:
        fail("query_count", "must not be negative")
    if cfg.seed < 0:
        fail("seed", "must not be negative")
    if cfg.purge_mode is PurgeMode.time and not cfg.epsilon_time > 0.0:
        fail("epsilon_time", "must be positive in time mode")

    if cfg.T_end < cfg.Ts or not _is_multiple(cfg.T_end, cfg.Ts):
        fail("T_end", "must be an integer multiple of Ts")
    for field in ("tau1", "tau2", "T1", "query_interval"):
        if not _is_multiple(getattr(cfg, field), cfg.Ts):
            fail(field, "must be an integer multiple of Ts")
    for field in ("tau1", "tau2", "T1"):
        if getattr(cfg, field) > cfg.T_end:
            fail(field, "window is longer than T_end")

    if len(cfg.x0) != 2:
        fail("x0", "must have 2 entries")
    if len(cfg.theta0) != 3:
        fail("theta0", "must have 3 entries")
    if len(cfg.W0) != 5:
        fail("W0", "must have 5 entries")
    if cfg.M < len(cfg.theta0):
        fail("M", "must be at least the number of unknown parameters")
    if 2 * cfg.N < len(cfg.W0):
        fail("N", "stack cannot hold enough equations for the weights")

    return cfg


def parse_config(text, base=DEFAULT_CONFIG):
    """Parse configuration file contents, overriding fields of ``base``."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        parser.read_file(io.StringIO(text))
    except configparser.Error as e:
        raise InvalidConfigError("could not parse file: {}".format(e))

    values = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise InvalidConfigError("unknown section", section)
        parsers = dict(_SECTIONS[section])
        for key, text in parser.items(section):
            if key not in parsers:
                raise InvalidConfigError("unknown key", section, key)
            try:
                values[key] = parsers[key](text.strip())
            except ValueError:
                raise InvalidConfigError(
                    "could not parse {!r}".format(text), section, key)

    return validate_config(base._replace(**values))


def load_config(path=None, base=DEFAULT_CONFIG):
    """Load a configuration file.

    Parameters
    ----------
    path : str or None
        File to read. If None, ``base`` is validated and returned.

    Raises
    ------
    InvalidConfigError
        If the file cannot be read or parsed, or the result is invalid.
    """
    if path is None:
        return validate_config(base)
    try:
        with io.open(path, encoding="utf-8") as f:
            text = f.read()
    except EnvironmentError as e:
        raise InvalidConfigError("could not read {}: {}".format(
            path, e.strerror))
    return parse_config(text, base)


def config_as_dict(cfg):
    """A JSON-serialisable copy of a configuration, grouped by section."""
    out = collections.OrderedDict()
    for section, fields in iteritems(_SECTIONS):
        out[section] = collections.OrderedDict()
        for field, _ in fields:
            value = getattr(cfg, field)
            if isinstance(value, PurgeMode):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            out[section][field] = value
    return out
