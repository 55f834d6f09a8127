"""Generate HVG scenario files."""

from experiments.base.generate import diagonal, prepare_scenarios, run_section, write_scenario


def generate_experiment(experiment_dir):
    scenario_dir = prepare_scenarios(experiment_dir)

    write_scenario(scenario_dir, "centred", {
        "spec": {"family": "hvg", "a": 2.0, "b": [[0.0, 0.0]], "q": diagonal(1.0, 0.5)},
        "run": run_section(),
        "checks": ["cf", "moments", "symmetry"],
    })

    write_scenario(scenario_dir, "drifting", {
        "spec": {"family": "hvg", "a": 2.0, "b": [[0.5, 0.0]], "q": diagonal(1.0, 0.5)},
        "run": run_section(),
        "checks": ["cf", "moments", "growth"],
    })

    write_scenario(scenario_dir, "jumps", {
        "spec": {"family": "hvg", "a": 2.0, "b": [[0.0]], "q": [[1.0]]},
        "run": run_section(samples=10_000),
        "checks": [{"id": "jump_measure", "options": {"radii": [0.5, 1.0]}}],
    })

    # A compound Poisson base under an independent inverse Gaussian and gamma clock.
    write_scenario(scenario_dir, "explicit", {
        "spec": {
            "family": "explicit",
            "base": {
                "drift": [[0.2], [0.0, 0.1]],
                "covariance": [[0.5], [[1.0, 0.2], [0.2, 0.5]]],
                "jumps": [
                    {"rate": 2.0, "law": {"type": "point_mass", "atoms": [[0.5], [-1.5]],
                                          "weights": [0.5, 0.5]}},
                    None,
                ],
            },
            "subordinator": {
                "drift": [0.1, 0.0],
                "jumps": {"type": "independent", "kernels": [
                    {"type": "inverse_gaussian", "s": 1.0, "c": 1.0},
                    {"type": "gamma", "a": 2.0},
                ]},
            },
        },
        "run": run_section(),
        "checks": ["cf", "moments", "growth"],
    })


if __name__ == "__main__":
    ROOT_DIR = "./experiments/hvg"
    generate_experiment(ROOT_DIR)
