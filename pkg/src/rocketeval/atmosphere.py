"""US Standard Atmosphere 1976, layers up to 47 km geopotential altitude.

The functions are numba-compiled so the flight integrator can call them from
inside its hot loop; they are equally callable from plain Python.
"""

from __future__ import annotations

import math

from numba import njit

R_AIR = 287.05287        # J/(kg*K)
GAMMA_AIR = 1.4
G0 = 9.80665             # m/s^2
SEA_LEVEL_TEMPERATURE = 288.15   # K
SEA_LEVEL_PRESSURE = 101325.0    # Pa

# Base pressures at layer boundaries (standard published values, Pa).
_P11 = 22632.06
_P20 = 5474.889
_P32 = 868.0187


@njit(cache=True)
def temperature(altitude: float) -> float:
    """Static air temperature (K) at altitude above mean sea level (m)."""
    h = altitude if altitude > 0.0 else 0.0
    if h < 11000.0:
        return 288.15 - 0.0065 * h
    if h < 20000.0:
        return 216.65
    if h < 32000.0:
        return 216.65 + 0.001 * (h - 20000.0)
    if h < 47000.0:
        return 228.65 + 0.0028 * (h - 32000.0)
    return 270.65


@njit(cache=True)
def pressure(altitude: float) -> float:
    """Static pressure (Pa)."""
    h = altitude if altitude > 0.0 else 0.0
    if h < 11000.0:
        t = 288.15 - 0.0065 * h
        return 101325.0 * (t / 288.15) ** (G0 / (R_AIR * 0.0065))
    if h < 20000.0:
        return _P11 * math.exp(-G0 * (h - 11000.0) / (R_AIR * 216.65))
    if h < 32000.0:
        t = 216.65 + 0.001 * (h - 20000.0)
        return _P20 * (t / 216.65) ** (-G0 / (R_AIR * 0.001))
    if h < 47000.0:
        t = 228.65 + 0.0028 * (h - 32000.0)
        return _P32 * (t / 228.65) ** (-G0 / (R_AIR * 0.0028))
    t = 270.65
    p47 = _P32 * (t / 228.65) ** (-G0 / (R_AIR * 0.0028))
    return p47 * math.exp(-G0 * (h - 47000.0) / (R_AIR * t))


@njit(cache=True)
def density(altitude: float) -> float:
    """Air density (kg/m^3) from the ideal gas law."""
    return pressure(altitude) / (R_AIR * temperature(altitude))


@njit(cache=True)
def speed_of_sound(altitude: float) -> float:
    """Speed of sound (m/s)."""
    return math.sqrt(GAMMA_AIR * R_AIR * temperature(altitude))
