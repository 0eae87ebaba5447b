import numpy as np
import pytest

from mirrorqed.bic import design_bic_geometry
from mirrorqed.dynamics import simulate_emission
from mirrorqed.model import AmplitudePair


@pytest.fixture(scope="session")
def excited():
    return AmplitudePair(1.0 + 0.0j, 0.0j, "bare")


@pytest.fixture(scope="session")
def two_bic_params():
    # gamma=1, omega_rabi=10, delta=0, windings 11 and 9:
    # tau = 2*pi/10, omega_e = 100
    return design_bic_geometry(1.0, 10.0, 0.0, 10, 1)


@pytest.fixture(scope="session")
def two_bic_run(two_bic_params, excited):
    """Long two-BIC emission history shared by the persistent-oscillation
    and field-confinement tests."""
    return simulate_emission(two_bic_params, excited, 50.2, h=1e-3)
