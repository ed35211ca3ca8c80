import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

import acceptance_report
from vaselab.mesh import generate as G
from vaselab.mesh.axis import Axis


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_report.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def z_axis() -> Axis:
    return Axis(point=(0.0, 0.0, 0.0), direction=(0.0, 0.0, 1.0), fit_rms=0.0)


@pytest.fixture(scope="session")
def unit_cube():
    return G.cube_mesh(1.0)


@pytest.fixture(scope="session")
def cm_cube():
    """10 mm cube = 1 ml."""
    return G.cube_mesh(10.0)


@pytest.fixture(scope="session")
def icosphere_r10():
    return G.icosphere_mesh(10.0, 3)


@pytest.fixture(scope="session")
def cylinder_fine():
    """High angular resolution so the rollout is isometric to < 1e-6."""
    return G.cylinder_mesh(25.0, 60.0, n_theta=2048, n_z=8)


@pytest.fixture()
def rng():
    """Fresh generator per test: deterministic and order-independent."""
    return np.random.default_rng(20260808)
