"""
Conversion between the user-facing units accepted by the CLI and the
Gaussian-CGS units used internally.
"""
import math
from enum import Enum
from typing import Union

from app.core.constants import C
from app.core.exceptions import ConfigError

ERG_PER_EV = 1.602176634e-12


class Unit(str, Enum):
    MICROMETER = "um"
    THZ = "THz"
    MEV = "meV"
    EV = "eV"
    GW_PER_CM2 = "GW/cm2"
    DEGREES = "deg"
    KELVIN = "K"
    CM = "cm"
    PER_SECOND = "1/s"


# Accepted spellings for each tag
_ALIASES = {
    "um": Unit.MICROMETER, "µm": Unit.MICROMETER, "micron": Unit.MICROMETER,
    "thz": Unit.THZ,
    "mev": Unit.MEV,
    "ev": Unit.EV,
    "gw/cm2": Unit.GW_PER_CM2, "gw/cm²": Unit.GW_PER_CM2,
    "deg": Unit.DEGREES, "degrees": Unit.DEGREES,
    "k": Unit.KELVIN,
    "cm": Unit.CM,
    "1/s": Unit.PER_SECOND, "s^-1": Unit.PER_SECOND, "s⁻¹": Unit.PER_SECOND,
}


def parse_unit(tag: Union[str, Unit]) -> Unit:
    """Resolve a unit tag, rejecting anything unknown"""
    if isinstance(tag, Unit):
        return tag
    unit = _ALIASES.get(str(tag).strip().lower())
    if unit is None:
        raise ConfigError(f"Unknown unit tag: {tag!r}")
    return unit


def to_internal(value: float, unit: Union[str, Unit]) -> float:
    """
    Convert a user-facing value to CGS.

    Wavelengths become angular frequencies (rad/s), THz values are cyclic
    frequencies converted to rad/s, energies become erg, intensities
    erg s^-1 cm^-2 and angles radians.

    Args:
        value: The number to convert
        unit: Unit tag of the input

    Returns:
        float: The value in internal units
    """
    unit = parse_unit(unit)
    if unit is Unit.MICROMETER:
        return 2.0 * math.pi * C / (value * 1e-4)
    if unit is Unit.THZ:
        return 2.0 * math.pi * value * 1e12
    if unit is Unit.MEV:
        return value * 1e-3 * ERG_PER_EV
    if unit is Unit.EV:
        return value * ERG_PER_EV
    if unit is Unit.GW_PER_CM2:
        return value * 1e9 * 1e7
    if unit is Unit.DEGREES:
        return math.radians(value)
    return float(value)


def from_internal(value: float, unit: Union[str, Unit]) -> float:
    """Inverse of to_internal"""
    unit = parse_unit(unit)
    if unit is Unit.MICROMETER:
        return 2.0 * math.pi * C / value * 1e4
    if unit is Unit.THZ:
        return value / (2.0 * math.pi * 1e12)
    if unit is Unit.MEV:
        return value / (1e-3 * ERG_PER_EV)
    if unit is Unit.EV:
        return value / ERG_PER_EV
    if unit is Unit.GW_PER_CM2:
        return value / 1e16
    if unit is Unit.DEGREES:
        return math.degrees(value)
    return float(value)


def intensity_from_field(E_sq: float, n: float = 1.0) -> float:
    """Intensity of a field with half-amplitude convention, I = c n |E|^2 / (8 pi)"""
    return C * n * E_sq / (8.0 * math.pi)


def field_from_intensity(intensity: float, n: float = 1.0) -> float:
    """|E|^2 carrying the given intensity"""
    return 8.0 * math.pi * intensity / (C * n)
