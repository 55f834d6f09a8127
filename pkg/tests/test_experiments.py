import importlib
import os

import pytest

from hilbertlevy.cli.config import load_config


@pytest.mark.parametrize("experiment", ["hnig", "stable", "hvg"])
def test_generated_scenarios_parse(tmp_path, experiment):
    generate = importlib.import_module(f"experiments.{experiment}.generate")
    generate.generate_experiment(str(tmp_path))
    scenarios = sorted(os.listdir(tmp_path / "scenarios"))
    assert scenarios
    for scenario in scenarios:
        config = load_config(str(tmp_path / "scenarios" / scenario / "scenario.yml"), seed=1)
        assert config.run.seed == 1
        assert config.spec.family in (experiment, "explicit")


def test_scenarios_are_regenerated(tmp_path):
    generate = importlib.import_module("experiments.hnig.generate")
    generate.generate_experiment(str(tmp_path))
    (tmp_path / "scenarios" / "stale").mkdir()
    generate.generate_experiment(str(tmp_path))
    assert "stale" not in os.listdir(tmp_path / "scenarios")
