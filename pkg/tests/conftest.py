from pathlib import Path

import pytest

from qslab.medium import MediumSpec, OscillatorSpecies

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def vacuum():
    return MediumSpec()


@pytest.fixture
def reference_medium():
    """Single species Omega=1, g=0.19: absorption band (0.9, 1.0), scaled units."""
    return MediumSpec(species=(OscillatorSpecies(1.0, 0.19),))


@pytest.fixture
def strong_medium():
    """Single species Omega=1, g=0.5: n0 = sqrt(6/7) at omega=2."""
    return MediumSpec(species=(OscillatorSpecies(1.0, 0.5),))


@pytest.fixture
def two_species_medium():
    return MediumSpec(species=(OscillatorSpecies(1.0, 0.1), OscillatorSpecies(2.0, 0.3)))
