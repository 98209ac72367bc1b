"""Unit conventions and conversions.

Internal units: energies in GHz (E/h), angular rates in rad/ns, decoherence
times in μs, noise frequencies in rad/s. Configuration values carry explicit
unit suffixes and are converted here.
"""

import numpy as np
from scipy import constants

TWO_PI = 2.0 * np.pi

HBAR = constants.hbar
K_B = constants.k
H_PLANCK = constants.h
PHI_0 = constants.physical_constants["mag. flux quantum"][0]
E_CHARGE = constants.e


def ghz_to_rad_per_ns(f_ghz: float) -> float:
    """Convert a frequency in GHz to an angular rate in rad/ns."""
    return float(TWO_PI * f_ghz)


def mhz_to_rad_per_ns(f_mhz: float) -> float:
    """Convert a frequency in MHz to an angular rate in rad/ns."""
    return float(TWO_PI * f_mhz * 1e-3)


def rad_per_ns_to_ghz(omega: float) -> float:
    return float(omega / TWO_PI)


def rad_per_ns_to_mhz(omega: float) -> float:
    return float(omega / TWO_PI * 1e3)


def rad_per_ns_to_per_us(rate: float) -> float:
    """Rate in 1/ns (angular) to 1/μs."""
    return float(rate * 1e3)


def per_us_to_per_ns(rate: float) -> float:
    return float(rate * 1e-3)


def rad_per_ns_to_rad_per_s(omega: float) -> float:
    return float(omega * 1e9)


def ghz_to_kelvin(f_ghz: float) -> float:
    """Photon energy h·f expressed as a temperature h·f/k_B."""
    return float(H_PLANCK * f_ghz * 1e9 / K_B)


def fF_to_farad(c_ff: float) -> float:
    return float(c_ff * 1e-15)
