import pytest

import json

from oirl.purging import PurgeMode
from oirl.harness.config import \
    InvalidConfigError, ExperimentConfig, DEFAULT_CONFIG, validate_config, \
    parse_config, load_config, config_as_dict


def test_default_config_valid():
    assert validate_config(DEFAULT_CONFIG) is DEFAULT_CONFIG
    assert DEFAULT_CONFIG.Ts == 0.005
    assert DEFAULT_CONFIG.tau1 == 1.0
    assert DEFAULT_CONFIG.tau2 == 0.6
    assert DEFAULT_CONFIG.purge_mode is PurgeMode.metric


class TestInvalidConfigError(object):

    @pytest.mark.parametrize("args,text", [
        (("bad",), "bad"),
        (("bad", "irl"), "[irl]: bad"),
        (("bad", "irl", "N"), "[irl] N: bad"),
    ])
    def test_str(self, args, text):
        assert str(InvalidConfigError(*args)) == text


class TestValidateConfig(object):

    @pytest.mark.parametrize("changes,key", [
        (dict(Ts=0.0), "Ts"),
        (dict(Ts=float("nan")), "Ts"),
        (dict(k_theta=-1.0), "k_theta"),
        (dict(xi2=0.0), "xi2"),
        (dict(xi1=-0.5), "xi1"),
        (dict(query_count=-1), "query_count"),
        (dict(seed=-1), "seed"),
        (dict(T_end=30.0025), "T_end"),
        (dict(T_end=0.001), "T_end"),
        (dict(tau1=1.0025), "tau1"),
        (dict(T1=0.0001), "T1"),
        (dict(query_interval=0.0075), "query_interval"),
        (dict(T_end=0.8), "tau1"),
        (dict(T_end=0.5, tau1=0.5, tau2=0.6), "tau2"),
        (dict(x0=(1.0, )), "x0"),
        (dict(theta0=(0.0, 0.0)), "theta0"),
        (dict(W0=(0.0, ) * 6), "W0"),
        (dict(M=2), "M"),
        (dict(N=2), "N"),
        (dict(purge_mode=PurgeMode.time, epsilon_time=0.0), "epsilon_time"),
    ])
    def test_invalid(self, changes, key):
        with pytest.raises(InvalidConfigError) as exc_info:
            validate_config(DEFAULT_CONFIG._replace(**changes))
        assert exc_info.value.key == key

    def test_windows_longer_than_sum_allowed(self):
        # Each window fits but their sum does not: the regressors simply stay
        # zero for the whole run.
        cfg = DEFAULT_CONFIG._replace(T_end=1.2)
        assert validate_config(cfg) is cfg

    def test_zero_xi1_allowed(self):
        validate_config(DEFAULT_CONFIG._replace(xi1=0.0, query_count=0))


class TestParseConfig(object):

    def test_empty(self):
        assert parse_config("") == DEFAULT_CONFIG

    def test_sections(self):
        cfg = parse_config("[simulation]\n"
                           "Ts = 0.01\n"
                           "T_end = 5\n"
                           "x0 = 0.5, -0.5\n"
                           "\n"
                           "[sysid]\n"
                           "theta0 = 1, 2, 3\n"
                           "M = 50\n"
                           "\n"
                           "[purging]\n"
                           "purge_mode = time\n"
                           "epsilon_time = 2.5\n"
                           "\n"
                           "[query]\n"
                           "query_count = 0\n"
                           "query_interval = 0.01\n")
        assert cfg == DEFAULT_CONFIG._replace(
            Ts=0.01, T_end=5.0, x0=(0.5, -0.5), theta0=(1.0, 2.0, 3.0),
            M=50, purge_mode=PurgeMode.time, epsilon_time=2.5,
            query_count=0, query_interval=0.01)
        assert isinstance(cfg, ExperimentConfig)
        assert isinstance(cfg.M, int)

    def test_base(self):
        base = DEFAULT_CONFIG._replace(N=10)
        assert parse_config("[irl]\nxi1 = 0.5\n", base).N == 10

    @pytest.mark.parametrize("text,section,key", [
        ("[bogus]\nx = 1\n", "bogus", None),
        ("[irl]\nbogus = 1\n", "irl", "bogus"),
        ("[irl]\nN = many\n", "irl", "N"),
        ("[irl]\nN = 1.5\n", "irl", "N"),
        ("[purging]\npurge_mode = sometimes\n", "purging", "purge_mode"),
        ("[simulation]\nTs = -1\n", "simulation", "Ts"),
    ])
    def test_invalid(self, text, section, key):
        with pytest.raises(InvalidConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.section == section
        assert exc_info.value.key == key

    def test_keys_case_sensitive(self):
        with pytest.raises(InvalidConfigError):
            parse_config("[simulation]\nts = 0.01\n")

    def test_malformed(self):
        with pytest.raises(InvalidConfigError):
            parse_config("Ts = 0.01\n")


class TestLoadConfig(object):

    def test_none(self):
        assert load_config() == DEFAULT_CONFIG

    def test_file(self, tmpdir):
        path = tmpdir.join("experiment.ini")
        path.write("[irl]\nN = 20\n")
        assert load_config(str(path)).N == 20

    def test_missing_file(self, tmpdir):
        path = str(tmpdir.join("missing.ini"))
        with pytest.raises(InvalidConfigError) as exc_info:
            load_config(path)
        assert path in str(exc_info.value)


def test_config_as_dict():
    out = config_as_dict(DEFAULT_CONFIG)
    assert list(out) == ["simulation", "sysid", "irl", "purging", "query"]
    assert out["simulation"]["x0"] == [1.0, 1.0]
    assert out["purging"]["purge_mode"] == "metric"
    assert sorted(field for section in out.values() for field in section) \
        == sorted(ExperimentConfig._fields)
    # Serialisable
    json.dumps(out)
