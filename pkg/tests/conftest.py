import logging
from typing import Any, Dict, Generator

import numpy as np
import pytest

from qpu_pulse_sim.config.config import SystemConfig
from qpu_pulse_sim.core.errors import error_handler
from qpu_pulse_sim.core.units import TWO_PI
from qpu_pulse_sim.device import QubitCircuitParams, QubitKind


@pytest.fixture(scope="session")
def test_config() -> SystemConfig:
    """Create test configuration"""
    return SystemConfig(env="development", log_level="DEBUG")


@pytest.fixture(scope="session")
def transmon_params() -> QubitCircuitParams:
    """Transmon with E_J/E_C = 50 at ~5.7 GHz"""
    return QubitCircuitParams(kind=QubitKind.TRANSMON, EC=0.3, EJ=15.0)


@pytest.fixture(scope="session")
def duffing_qubit():
    """Duffing qubit at 4 GHz with α/2π = −200 MHz"""
    from qpu_pulse_sim.device import DuffingParams

    return DuffingParams(omega_q=TWO_PI * 4.0, alpha=-TWO_PI * 0.2)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized property checks"""
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def clean_error_handler() -> Generator:
    """Reset the global error handler between tests"""
    error_handler.clear_errors()
    yield
    error_handler.clear_errors()
    logging.getLogger("qpu_pulse_sim").setLevel(logging.NOTSET)


def two_qubit_device() -> Dict[str, Any]:
    """Raw device mapping: split transmon q0, transmon q1, one resonator"""
    return {
        "name": "test-chip",
        "qubits": [
            {
                "name": "q0",
                "kind": "split_transmon",
                "EC_GHz": 0.25,
                "EJ_GHz": 20.0,
                "d": 0.1,
                "T1_us": 85.0,
                "T2_us": 95.0,
                "T2E_us": 120.0,
            },
            {"name": "q1", "kind": "transmon", "EC_GHz": 0.3, "EJ_GHz": 15.0, "T1_us": 60.0},
        ],
        "couplings": [{"qubits": ["q0", "q1"], "g_MHz": 20.0}],
        "resonators": [
            {
                "name": "r0",
                "qubit": "q0",
                "omega_r_GHz": 7.0,
                "kappa_MHz": 2.0,
                "chi_MHz": 0.5,
                "g_MHz": 50.0,
            }
        ],
        "readout_chain": {
            "stages": [
                {"name": "paramp", "gain_dB": 20.0, "noise_temperature_K": 0.15},
                {"name": "hemt", "gain_dB": 40.0, "noise_temperature_K": 2.0},
            ]
        },
    }


@pytest.fixture
def device_data() -> Dict[str, Any]:
    """Fresh raw device mapping per test"""
    return two_qubit_device()
