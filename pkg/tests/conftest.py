"""Shared fixtures for the test suite.

The reference chain fixtures mirror the hardware described in
``paik.reference``: a 0.38 mm piezoelectric plate loaded by water,
backed by a lossy absorber, matched with a quarter-wave layer, and
read out through a short coaxial cable into one of four receiver
channels.
"""

import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from paik import FrequencyGrid, reference


@pytest.fixture(scope="session")
def ref_chain():
    """Channel 4 reference chain (lowest receiver impedance)."""
    return reference.reference_chain()


@pytest.fixture(scope="session")
def channel_chains():
    """All four receiver channels keyed by channel number."""
    return {ch: reference.reference_chain(channel=ch) for ch in (1, 2, 3, 4)}


@pytest.fixture(scope="session")
def band_grid():
    """Wide analysis grid covering the plate's first thickness resonance."""
    return FrequencyGrid(0.05e6, 20e6, 800)


@pytest.fixture(scope="session")
def configs_dir():
    return pathlib.Path(__file__).resolve().parent.parent / "configs"
