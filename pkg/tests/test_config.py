import pytest

from spnkit.core import ConfigurationError
from spnkit.systems import ConfigurationManager, LearnHyperparams


def test_defaults():
    config = ConfigurationManager()
    assert config.learn == LearnHyperparams()
    assert config.learn.min_instances == 200
    assert config.optimize.epochs == 100
    assert config.emit.function_name == "spn_loglik"
    assert config.output.precision == 6


def test_yaml_sections_are_loaded(tmp_path):
    path = tmp_path / "spnkit.yaml"
    path.write_text("learn:\n  min_instances: 50\n  dependence_threshold: 0.5\n"
                    "emit:\n  function_name: ll\n  emit_main: true\n"
                    "output:\n  log_level: info\n", encoding="utf-8")
    config = ConfigurationManager.from_yaml(str(path))
    assert config.learn.min_instances == 50
    assert config.learn.dependence_threshold == 0.5
    assert config.learn.cluster_count == 2
    assert config.emit.function_name == "ll" and config.emit.emit_main is True
    assert config.output.log_level == "INFO"


def test_empty_yaml_gives_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert ConfigurationManager.from_yaml(str(path)).to_dict() == ConfigurationManager().to_dict()


@pytest.mark.parametrize("text, message", [
    ("plotting: {}\n", "unknown section"),
    ("learn:\n  colour: red\n", "unknown key"),
    ("learn:\n  min_instances: lots\n", "min_instances"),
    ("learn:\n  cluster_count: 1\n", "cluster_count"),
    ("emit:\n  emit_main: 1\n", "true/false"),
    ("learn: [1, 2]\n", "mapping"),
    ("learn: {min_instances: [\n", "Invalid YAML"),
])
def test_bad_configuration_files(tmp_path, text, message):
    path = tmp_path / "bad.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigurationError, match=message):
        ConfigurationManager.from_yaml(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        ConfigurationManager.from_yaml(str(tmp_path / "nope.yaml"))


def test_overrides_skip_none_and_revalidate():
    config = ConfigurationManager()
    config.override("learn", seed=9, min_instances=None)
    assert config.learn.seed == 9
    assert config.learn.min_instances == 200
    with pytest.raises(ConfigurationError):
        config.override("optimize", learning_rate=-1.0)
