import numpy as np
import pytest

from reopen.bundle import load_dataset
from reopen.data import (EconParams, generate_synthetic_economy, make_economy,
                         make_pandemic_calibration, CriticalityMatrix,
                         InventoryTargets)


@pytest.fixture(scope="session")
def bundled():
    return load_dataset()


@pytest.fixture()
def toy_economy():
    # Two sectors, row identities 10+20+50+20 = 100 and 30+5+45+20 = 100.
    return make_economy(
        codes=["S1", "S2"],
        Z0=[[10.0, 20.0], [30.0, 5.0]],
        x0=[100.0, 100.0],
        c0=[50.0, 45.0],
        f0=[20.0, 20.0],
        l0=[30.0, 40.0],
        e0=[10.0, 15.0],
    )


@pytest.fixture()
def toy_targets():
    return InventoryTargets(n_days=np.array([10.0, 10.0]))


@pytest.fixture(scope="session")
def synth10():
    return generate_synthetic_economy(10, seed=11)


def synthetic_demand_only_calibration(economy, eps_D):
    """Calibration with no supply shocks and a chosen demand-shock vector."""
    n = economy.n
    return make_pandemic_calibration(
        economy.codes, eps_S=np.zeros(n), eps_D=np.asarray(eps_D, dtype=float),
        rli=np.full(n, 0.5), ess_w=np.ones(n), f_shock=np.zeros(n),
        onsite=np.zeros(n, dtype=bool))


def default_params(**overrides):
    return EconParams(**overrides)
