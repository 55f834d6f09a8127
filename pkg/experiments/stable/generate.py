"""Generate symmetric strictly stable scenario files."""

from experiments.base.generate import diagonal, prepare_scenarios, run_section, write_scenario


ALPHAS = (0.5, 1.0, 1.5, 2.0)


def generate_experiment(experiment_dir):
    scenario_dir = prepare_scenarios(experiment_dir)

    for alpha in ALPHAS:
        checks = ["cf", "moments", {"id": "scaling", "options": {"t": 2.0}}]
        if alpha < 2:
            low, high = alpha - 0.2, alpha + 0.2
            checks.append({"id": "tail_index",
                           "options": {"samples": 1_000_000, "expected_range": [low, high]}})
        write_scenario(scenario_dir, f"alpha-{alpha}", {
            "spec": {"family": "stable", "alpha": alpha, "q": diagonal(1.0, 0.5)},
            "run": run_section(),
            "checks": checks,
        })

    # A Gaussian process tested for stability with the wrong index.
    write_scenario(scenario_dir, "negative-control", {
        "spec": {"family": "stable", "alpha": 2.0, "q": diagonal(1.0, 0.5)},
        "run": run_section(),
        "checks": [{"id": "scaling", "options": {"alpha": 1.0, "t": 2.0}}],
    })


if __name__ == "__main__":
    ROOT_DIR = "./experiments/stable"
    generate_experiment(ROOT_DIR)
