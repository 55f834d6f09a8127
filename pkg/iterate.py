import argparse
import enum
import importlib
import logging
import os

from hilbertlevy.cli.commands import cmd_verify
from hilbertlevy.cli.config import load_config


class ExperimentType(str, enum.Enum):
    HNIG = "hnig"
    STABLE = "stable"
    HVG = "hvg"


if __name__ == "__main__":
        __parser = argparse.ArgumentParser(description="Generate and verify the desk instances.")

        __parser.add_argument(
            "--experiment-type",
            type=str.lower,
            choices=[t.value for t in ExperimentType],
            default="hnig",
            help="experiment type",
        )
        __parser.add_argument(
            "--iterations",
            type=int,
            default=1,
            help="number of iterations, each with the next seed"
        )
        __parser.add_argument(
            "--seed",
            type=int,
            default=0,
            help="seed of the first iteration"
        )
        __parser.add_argument(
            "--threads",
            type=int,
            default=1,
            help="Monte Carlo worker threads"
        )

        __args = __parser.parse_args()
        logging.basicConfig(level=logging.INFO)

        generate_module = importlib.import_module(f"experiments.{__args.experiment_type}.generate")

        root_dir = f"experiments/{__args.experiment_type}"
        scenarios_dir = os.path.join(root_dir, "scenarios")
        results_dir = os.path.join(root_dir, "results")

        generate_module.generate_experiment(root_dir)
        for iteration in range(__args.iterations):
            seed = __args.seed + iteration
            for scenario in sorted(os.listdir(scenarios_dir)):
                config = load_config(os.path.join(scenarios_dir, scenario, "scenario.yml"), seed)
                out_dir = os.path.join(results_dir, scenario, f"seed-{seed}")
                cmd_verify(config, out_dir, __args.threads)
