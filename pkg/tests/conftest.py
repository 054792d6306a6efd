import pytest

from forrelab.services.oracle_world import PRESETS, ScaleProfile, WorldKind, sample_prf_world, sample_trapdoor_world


@pytest.fixture
def prf_profile() -> ScaleProfile:
    return PRESETS["desk"]


@pytest.fixture
def trapdoor_profile() -> ScaleProfile:
    return PRESETS["desk-trapdoor"]


@pytest.fixture
def small_prf_profile() -> ScaleProfile:
    """Short blocks for tests that never decode."""
    return ScaleProfile(kind=WorldKind.PRF, n=2, ell=2)


@pytest.fixture
def small_trapdoor_profile() -> ScaleProfile:
    return ScaleProfile(kind=WorldKind.TRAPDOOR, n=2, ell=2)


@pytest.fixture
def prf_world(prf_profile):
    return sample_prf_world(prf_profile, 7)


@pytest.fixture
def trapdoor_world(trapdoor_profile):
    return sample_trapdoor_world(trapdoor_profile, 11)
