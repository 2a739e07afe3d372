import json

import pytest

from ttolab.config import (
    ConfigError,
    RunConfig,
    apply_overrides,
    config_from_dict,
    load_config,
)


def test_defaults_validate():
    config = RunConfig().validate()
    assert config.sweep.seed == 20250815
    assert config.quadrature.tol == 1e-12


def test_roundtrip_through_dict():
    config = RunConfig().validate()
    back = config_from_dict(config.to_dict())
    assert back.to_dict() == config.to_dict()


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"swep": {"seed": 1}})
    with pytest.raises(ConfigError):
        config_from_dict({"sweep": {"sed": 1}})


def test_validation_bounds():
    with pytest.raises(ConfigError):
        config_from_dict({"sweep": {"instances": 0}})
    with pytest.raises(ConfigError):
        config_from_dict({"essential": {"ratio": 1.5}})
    with pytest.raises(ConfigError):
        config_from_dict({"tolerances": {"identity": -1.0}})


def test_overrides_dotted_paths():
    config = RunConfig().validate()
    apply_overrides(config, {"sweep.seed": 7, "nehari.grid_m": 512})
    assert config.sweep.seed == 7
    assert config.nehari.grid_m == 512


def test_override_type_coercion():
    config = RunConfig().validate()
    apply_overrides(config, {"sweep.seed": "12", "decay.threshold": "0.1"})
    assert config.sweep.seed == 12
    assert abs(config.decay.threshold - 0.1) < 1e-15
    with pytest.raises(ConfigError):
        apply_overrides(config, {"sweep.instances": "many"})
    with pytest.raises(ConfigError):
        apply_overrides(config, {"essential.n_list": "2,4"})
    with pytest.raises(ConfigError):
        apply_overrides(config, {"sweep.bogus": 1})


def test_load_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"sweep": {"seed": 99}, "besov": {"degree": 2}}))
    config = load_config(path)
    assert config.sweep.seed == 99
    assert config.besov.degree == 2


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
