"""Shared pieces of the scenario generators."""

import os
import shutil

import yaml


DEFAULT_SAMPLES = 100_000


def run_section(samples=DEFAULT_SAMPLES, t=1.0):
    return {"seed": 0, "samples": samples, "t": t}


def diagonal(*eigenvalues):
    """A single-component covariance given by its eigenvalues."""
    return [list(eigenvalues)]


def prepare_scenarios(experiment_dir):
    """Empty the scenario directory of an experiment and return its path."""
    scenario_dir = os.path.join(experiment_dir, "scenarios")

    try:
        shutil.rmtree(scenario_dir)
    except FileNotFoundError:
        pass
    os.makedirs(scenario_dir)
    return scenario_dir


def write_scenario(scenario_dir, name, scenario):
    scenario_path = os.path.join(scenario_dir, name)
    os.mkdir(scenario_path)
    with open(os.path.join(scenario_path, "scenario.yml"), "w", encoding="utf-8") as scenario_file:
        yaml.dump(scenario, scenario_file, sort_keys=False)
    return scenario_path
