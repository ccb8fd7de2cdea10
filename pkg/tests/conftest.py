import pytest

from app.core.presets import graphene_preset, ti_preset
from app.core.units import to_internal
from app.models.material_model import DetectionGeometry, Geometry
from app.services.three_wave_service import three_wave_service


@pytest.fixture(scope="session")
def graphene():
    return graphene_preset()


@pytest.fixture(scope="session")
def ti():
    return ti_preset()


@pytest.fixture(scope="session")
def geometry():
    """10 um pump at 45 deg from vacuum onto an n = 2 substrate, idler at 20 deg"""
    return Geometry(omega_p=to_internal(10.0, "um"))


@pytest.fixture(scope="session")
def detection():
    return DetectionGeometry(L_x=0.1, L_y=0.1, delta_omega=to_internal(0.01, "THz"), A_D=0.01, T=300.0)


@pytest.fixture(scope="session")
def fig2_point(geometry, graphene):
    """Phase-matched operating point at the default figure parameters"""
    return three_wave_service.phase_match(geometry, graphene, gamma_s=1e11)
