"""Physical constants (2019 SI exact values) and small unit helpers.

Everything internal to the package works in SI units (joules, hertz,
kelvin, per cubic metre).  Electronvolts and per-cubic-micron densities
appear only at API boundaries, converted through the factors below.
"""

import math

# Exact SI defining constants
PLANCK = 6.62607015e-34            # J s
HBAR = PLANCK / (2.0 * math.pi)    # J s
BOLTZMANN = 1.380649e-23           # J / K
ELEMENTARY_CHARGE = 1.602176634e-19  # C, also J per eV

# CODATA 2018 magnetic constant (no longer exact since the SI redefinition)
MU_0 = 1.25663706212e-6            # H / m

EV_PER_JOULE = 1.0 / ELEMENTARY_CHARGE
JOULE_PER_EV = ELEMENTARY_CHARGE

# densities: per m^3  <->  per um^3
PER_M3_TO_PER_UM3 = 1e-18
PER_UM3_TO_PER_M3 = 1e18


def dbm_to_watts(p_dbm: float) -> float:
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def watts_to_dbm(p_watts: float) -> float:
    if p_watts <= 0.0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(p_watts / 1e-3)
