"""Generate HNIG scenario files."""

from experiments.base.generate import diagonal, prepare_scenarios, run_section, write_scenario


def hnig_spec(s=1.0, c=1.0, b=(0.5, 0.0), q=(1.0, 0.5)):
    return {"family": "hnig", "s": s, "c": c, "b": [list(b)], "q": diagonal(*q)}


def generate_experiment(experiment_dir):
    scenario_dir = prepare_scenarios(experiment_dir)

    write_scenario(scenario_dir, "desk", {
        "spec": hnig_spec(),
        "run": run_section(),
        "checks": ["cf", "moments", "growth", "tail_index"],
        "output": {"directory": "results", "formats": ["csv"]},
    })

    # Analytic values of a process with c off by 10%.
    write_scenario(scenario_dir, "negative-control", {
        "spec": {**hnig_spec(), "reference": {"c": 1.1}},
        "run": run_section(),
        "checks": ["cf", "moments"],
    })

    write_scenario(scenario_dir, "symmetric-jumps", {
        "spec": {"family": "hnig", "s": 1.0, "c": 1.0, "b": [[0.0]], "q": [[1.0]]},
        "run": run_section(samples=10_000),
        "checks": [
            "symmetry",
            {"id": "jump_measure", "options": {"radii": [0.5, 1.0, 2.0]}},
        ],
    })

    write_scenario(scenario_dir, "degenerate", {
        "spec": hnig_spec(c=0.0, b=(0.0, 0.0)),
        "run": run_section(samples=1_000_000),
        "checks": [
            "moments",
            {"id": "tail_index", "options": {"expected_range": [0.8, 1.2]}},
        ],
    })


if __name__ == "__main__":
    ROOT_DIR = "./experiments/hnig"
    generate_experiment(ROOT_DIR)
