from app.core.constants import HBAR
from app.core.units import to_internal
from app.models.material_model import MaterialParams

GRAPHENE_V_F = 1.0e8
# 2 E_F on a 10 um pump
RESONANT_E_F = 0.5 * HBAR * to_internal(10.0, "um")


def graphene_preset(E_F: float = RESONANT_E_F, gamma_pol: float = 1e12) -> MaterialParams:
    """
    Monolayer graphene, g = 4.

    The default Fermi energy puts a 10 um pump on the 2 E_F resonance.
    """
    return MaterialParams(E_F=E_F, v_F=GRAPHENE_V_F, g=4, gamma_pol=gamma_pol, s_F=1, n_layers=1)


def ti_preset(E_F: float = RESONANT_E_F, gamma_pol: float = 1e12) -> MaterialParams:
    """
    Thin Bi2Se3 film: half the graphene Fermi velocity and half its degeneracy.

    The two single-cone surfaces of the film are what g = 2 counts, so the
    film is one layer.
    """
    return MaterialParams(E_F=E_F, v_F=0.5 * GRAPHENE_V_F, g=2, gamma_pol=gamma_pol, s_F=1, n_layers=1)
