import math

import pytest

from lmtpsi import LaserParams, MomentumGrid, rb87

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def species():
    return rb87()


@pytest.fixture(scope="session")
def laser_100_500(species):
    """Omega0 = 2pi x 100 MHz, Delta0 = 2pi x 500 MHz, recoil compensated."""
    return LaserParams.recoil_compensated(TWO_PI * 100e6, TWO_PI * 500e6, species)


@pytest.fixture(scope="session")
def laser_low(species):
    """Omega0 = 2pi x 10 sqrt(10) MHz, Delta0 = 2pi x 500 MHz."""
    return LaserParams.recoil_compensated(
        TWO_PI * 10 * math.sqrt(10) * 1e6, TWO_PI * 500e6, species)


@pytest.fixture(scope="session")
def point_grid():
    """Default grid for a 0.1 um point source: extent 16/a, 4096 points."""
    return MomentumGrid.from_extent(16.0 / 0.1e-6, 4096)
