import numpy as np
import pytest

from auglqr import anchor_x0, build_closed_loop, solve_riccati, solve_sylvester

from _support import SUITE_DIMS, load_fixture, random_stabilizable_model


@pytest.fixture(scope="session")
def golden_spec():
    return load_fixture("golden.json")


@pytest.fixture(scope="session")
def back_spec():
    return load_fixture("back.json")


@pytest.fixture(scope="session")
def suite_models(golden_spec, back_spec):
    """GOLDEN, BACK, and 20 seeded random stabilizable models."""
    rng = np.random.default_rng(20250810)
    models = [("GOLDEN", golden_spec), ("BACK", back_spec)]
    for i, (n_k, n_x, n_z, n_u, beta) in enumerate(SUITE_DIMS):
        models.append(
            (f"random-{i:02d}", random_stabilizable_model(rng, n_k, n_x, n_z, n_u, beta))
        )
    return models


@pytest.fixture(scope="session")
def solved_suite(suite_models):
    """Each suite model with its Riccati and Sylvester solutions."""
    return [
        (name, spec, reg, solve_sylvester(spec, reg))
        for name, spec, reg in (
            (name, spec, solve_riccati(spec)) for name, spec in suite_models
        )
    ]


@pytest.fixture(scope="session")
def golden_solved(golden_spec):
    reg = solve_riccati(golden_spec)
    aug = solve_sylvester(golden_spec, reg)
    anchored = anchor_x0(golden_spec, reg, aug)
    system = build_closed_loop(golden_spec, reg, aug, anchored)
    return golden_spec, reg, aug, anchored, system


@pytest.fixture(scope="session")
def back_solved(back_spec):
    reg = solve_riccati(back_spec)
    aug = solve_sylvester(back_spec, reg)
    anchored = anchor_x0(back_spec, reg, aug)
    system = build_closed_loop(back_spec, reg, aug, anchored)
    return back_spec, reg, aug, anchored, system
