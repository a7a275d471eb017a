"""Tests for YAML configuration loading and validation."""

import os

import pytest

from src.config.config_manager import ConfigManager, RunConfig

LAB_CONFIG = os.path.join(os.path.dirname(__file__), os.pardir, "config", "lab_config.yaml")


def write_config(tmp_path, text):
    path = tmp_path / "run.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestConfigManager:
    def test_shipped_config_loads(self):
        config = ConfigManager(LAB_CONFIG).load_config()
        assert [form.source for form in config.forms] == ["level11", "delta"]
        assert config.moment.h_values == [3, 4, 5, 6]
        assert config.recognition.height_bound == 10 ** 6
        assert config.lattice.p == 5 and config.lattice.h == 4

    def test_missing_optional_file_gives_defaults(self, tmp_path):
        config = ConfigManager(str(tmp_path / "absent.yaml")).load_config(required=False)
        assert isinstance(config, RunConfig)
        assert config.forms[0].source == "level11"
        assert config.output_format == "json"
        assert config.threads == 0

    def test_missing_required_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ConfigManager(str(tmp_path / "absent.yaml")).load_config()

    def test_partial_file_keeps_defaults(self, tmp_path):
        path = write_config(tmp_path, "seed: 7\nmoment:\n  p: 5\n  h_values: [2, 3]\n")
        config = ConfigManager(path).load_config()
        assert config.seed == 7
        assert config.moment.p == 5 and config.moment.h_values == [2, 3]
        assert config.moment.l1 == 1
        assert config.cutoffs.afe_multiplier == 1.0

    def test_form_shorthand(self, tmp_path):
        path = write_config(tmp_path, "forms:\n  - delta\n  - source: level11\n    N: 5000\n")
        config = ConfigManager(path).load_config()
        assert [(form.source, form.N) for form in config.forms] == [("delta", 20000), ("level11", 5000)]

    @pytest.mark.parametrize("text,key", [
        ("moment:\n  p: 4\n", "moment.p"),
        ("moment:\n  h_values: [1]\n", "moment.h_values"),
        ("output_format: xml\n", "output_format"),
        ("threads: -1\n", "threads"),
        ("log_level: LOUD\n", "log_level"),
        ("cutoffs:\n  split: 0\n", "cutoffs.split"),
        ("forms:\n  - source: level11\n    N: 0\n", "Form 0"),
        ("fetch_url: ftp://example.org/f.txt\n", "fetch_url"),
        ("lattice: [1, 2]\n", "lattice"),
    ])
    def test_invalid_values_name_the_key(self, tmp_path, text, key):
        path = write_config(tmp_path, text)
        with pytest.raises(ValueError, match=key.replace(".", r"\.")):
            ConfigManager(path).load_config()

    def test_malformed_yaml(self, tmp_path):
        path = write_config(tmp_path, "moment: [unclosed\n")
        with pytest.raises(ValueError, match="Invalid YAML"):
            ConfigManager(path).load_config()

    def test_parameters_exclude_paths(self):
        parameters = RunConfig().to_dict()
        assert "cache_dir" not in parameters and "log_file" not in parameters
        assert parameters["forms"] == [{"source": "level11", "N": 20000}]

    def test_get_form(self):
        manager = ConfigManager(LAB_CONFIG)
        assert manager.get_form("delta") is None
        manager.load_config()
        assert manager.get_form("delta").N == 20000
        assert manager.get_form("missing") is None
