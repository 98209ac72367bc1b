"""Test suite for qpu_pulse_sim."""
