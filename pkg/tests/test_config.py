#!/usr/bin/env python3
import os

from curvezeta.config import LOGGING_CONFIG, config


def test_config_fields():
    assert config().name == "curvezeta"
    assert config().zeta.start_truncation == 8
    assert config().zeta.max_truncation_norm == 512
    assert config().zeta.finite_field_budget == 1_000_000
    assert config().zeta.oracle_extra_degree == 5
    assert config().zeta.concurrent_checks is True
    assert config().zeta.output_format == "text"


def test_config_logging_to_stderr():
    assert LOGGING_CONFIG["handlers"]["default"]["stream"] == "ext://sys.stderr"
    assert "curvezeta" in LOGGING_CONFIG["loggers"]


def test_config_reinit():
    conf = config().dump()
    assert config().dump() == conf
    # Changes are ignored without reinit
    assert config("tests/data/config-2.yaml").dump() == conf
    # Changes are applied after reinit
    config("tests/data/config-2.yaml", reload=True)
    assert config().dump() != conf


def test_config_path_load():
    config("tests/data/config-2.yaml", reload=True)
    assert config().name == "curvezeta-2"
    assert config().zeta.start_truncation == 4
    assert config().zeta.concurrent_checks is False
    assert config().zeta.output_format == "json"


def test_config_path_load_from_env(monkeypatch):
    monkeypatch.setattr(os, "environ", {"CURVEZETA_CONFIG": "tests/data/config-2.yaml"})
    assert config(reload=True).zeta.finite_field_budget == 1000


def test_config_path_failed_path_fallback():
    config("tests/data/config-dontexist.yaml", reload=True)
    assert config().zeta.start_truncation == 8
