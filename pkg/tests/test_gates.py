"""
Tests for the gates module.

This module contains unit tests for the gate library, virtual-Z
compilation, the flux-activated iSWAP and CPHASE gates, cross-resonance
and the gate identities.
"""

import math

import numpy as np
import pytest

from qpu_pulse_sim.core.errors import CompileError, ErrorCode, ParameterError, RegimeError
from qpu_pulse_sim.core.operators import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z
from qpu_pulse_sim.core.units import TWO_PI
from qpu_pulse_sim.device import QubitCircuitParams, QubitKind
from qpu_pulse_sim.gates import (
    CPHASE_STRATEGIES,
    IDENTITY_TARGETS,
    FrequencyMap,
    GateOp,
    TransmonPair,
    TwoQubitFluxGateConfig,
    ZetaMap,
    any_su2_sequence,
    bswap_gate_time,
    bswap_rate,
    bswap_unitary,
    circuit_unitary,
    cnot,
    cnot_from_zx,
    conditional_phase_integral,
    corrected_iswap,
    cphase,
    cphase_trajectory,
    cphase_unitary,
    cr_effective_params,
    cz_phi,
    decompose_zxzxz,
    gate_fidelity,
    hadamard,
    iswap_chevron,
    iswap_phase_correction,
    iswap_unitary,
    mixing_angle,
    operator_distance,
    phased_x_gate,
    rotation_error_angle,
    run_circuit,
    schedule_sequence,
    simulate_cphase,
    simulate_cr_rabi,
    simulate_iswap,
    su2_gate,
    synthesize_identity,
    two_excitation_hamiltonian,
    uzz,
    virtual_z_compile,
    x_gate,
    y_gate,
    z_gate,
    zeta,
    zx_unitary,
)
from qpu_pulse_sim.gates.cphase import slepian_window
from qpu_pulse_sim.pulse import DrivePulse, FluxTrajectory, gaussian

HALF_PI = math.pi / 2


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def wrapped(angle: float) -> float:
    return float(np.angle(np.exp(1j * angle)))


def make_pair(g: float) -> TransmonPair:
    """Split transmon at ~6 GHz next to a fixed transmon at ~5 GHz."""
    return TransmonPair(
        tunable=QubitCircuitParams(kind=QubitKind.SPLIT_TRANSMON, EC=0.25, EJ=19.5),
        fixed=QubitCircuitParams(kind=QubitKind.TRANSMON, EC=0.25, EJ=13.8),
        g=g,
    )


@pytest.fixture(scope="module")
def fmap() -> FrequencyMap:
    return FrequencyMap(make_pair(TWO_PI * 0.02))


@pytest.fixture(scope="module")
def zmap(fmap) -> ZetaMap:
    return ZetaMap(fmap)


@pytest.fixture(scope="module")
def weak_fmap() -> FrequencyMap:
    """g/2π = 4 MHz keeps the dressing error of a sudden iSWAP below 1e-4."""
    return FrequencyMap(make_pair(TWO_PI * 0.004))


class TestGateLibrary:
    """Test gate unitaries and metrics."""

    def test_x_pi_is_minus_i_x(self):
        np.testing.assert_allclose(x_gate(math.pi).unitary, -1j * PAULI_X, atol=1e-15)

    def test_z_rotation_is_diagonal(self):
        theta = 0.37
        expected = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
        np.testing.assert_allclose(z_gate(theta).unitary, expected, atol=1e-15)
        assert z_gate(theta).is_diagonal

    def test_y_is_phased_x_at_minus_half_pi(self):
        np.testing.assert_allclose(
            y_gate(0.8).unitary, phased_x_gate(0.8, -HALF_PI).unitary, atol=1e-14
        )

    def test_phased_x_conjugates_x_by_z(self):
        theta, phi = 1.1, 0.6
        expected = z_gate(-phi).unitary @ x_gate(theta).unitary @ z_gate(phi).unitary
        np.testing.assert_allclose(phased_x_gate(theta, phi).unitary, expected, atol=1e-14)

    def test_hadamard_from_z_then_y(self):
        U = circuit_unitary([z_gate(math.pi), y_gate(HALF_PI)], 1)
        assert operator_distance(U, hadamard().unitary) < 1e-12

    def test_su2_rejects_non_unit_axis(self):
        with pytest.raises(ParameterError):
            su2_gate((1.0, 1.0, 0.0), 0.5)

    def test_su2_about_y_matches_y_gate(self):
        np.testing.assert_allclose(
            su2_gate((0.0, 1.0, 0.0), 0.9).unitary, y_gate(0.9).unitary, atol=1e-15
        )

    def test_gate_op_rejects_non_unitary(self):
        with pytest.raises(ParameterError) as exc:
            GateOp("bad", (0,), np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert exc.value.code == ErrorCode.INVALID_OPERATOR

    def test_gate_op_rejects_repeated_qubits(self):
        with pytest.raises(ParameterError):
            GateOp("CZ", (1, 1), cphase().unitary)

    def test_cz_phi_and_uzz(self):
        phi = 0.9
        np.testing.assert_allclose(
            np.diag(cz_phi(phi).unitary), [1, 1, 1, np.exp(-1j * phi)], atol=1e-15
        )
        zz = np.diag([1.0, -1.0, -1.0, 1.0])
        np.testing.assert_allclose(np.diag(uzz(phi).unitary), np.exp(-0.5j * phi * np.diag(zz)))
        np.testing.assert_allclose(cphase().unitary, np.diag([1, 1, 1, -1]), atol=1e-15)

    def test_zx_unitary_is_exponential(self):
        theta = 0.4
        ZX = np.kron(PAULI_Z, PAULI_X)
        expected = math.cos(theta / 2) * np.eye(4) - 1j * math.sin(theta / 2) * ZX
        np.testing.assert_allclose(zx_unitary(theta).unitary, expected, atol=1e-15)

    def test_bswap_unitary_couples_00_and_11_only(self):
        U = bswap_unitary(HALF_PI, 0.3).unitary
        np.testing.assert_allclose(U[1:3, 1:3], np.eye(2), atol=1e-15)
        assert abs(U[3, 0]) == pytest.approx(1.0)

    def test_apply_gate_respects_qubit_order(self):
        state = run_circuit([x_gate(math.pi, 1)], 2)
        assert abs(state[1]) == pytest.approx(1.0)
        state = run_circuit([x_gate(math.pi, 0)], 2)
        assert abs(state[2]) == pytest.approx(1.0)

    def test_apply_gate_rejects_qubit_outside_register(self):
        with pytest.raises(ParameterError):
            circuit_unitary([x_gate(1.0, 2)], 2)

    def test_cnot_from_zx(self):
        U = circuit_unitary(cnot_from_zx(), 2)
        assert operator_distance(U, cnot().unitary) < 1e-12

    def test_gate_fidelity_examples(self):
        assert gate_fidelity(np.eye(2), np.eye(2)) == pytest.approx(1.0)
        # orthogonal Paulis leave only the d/(d(d+1)) floor
        assert gate_fidelity(PAULI_X, PAULI_I) == pytest.approx(1.0 / 3.0)
        assert gate_fidelity(np.exp(0.3j) * PAULI_Y, PAULI_Y) == pytest.approx(1.0)

    def test_gate_fidelity_small_rotation(self):
        eps = 1e-3
        F = gate_fidelity(x_gate(eps).unitary, np.eye(2))
        assert 1.0 - F == pytest.approx(eps**2 / 6.0, rel=1e-3)

    def test_gate_fidelity_rejects_mismatch_and_non_unitary(self):
        with pytest.raises(ParameterError) as exc:
            gate_fidelity(np.eye(2), np.eye(4))
        assert exc.value.code == ErrorCode.INVALID_PARAMS
        with pytest.raises(ParameterError) as exc:
            gate_fidelity(2.0 * np.eye(2), np.eye(2))
        assert exc.value.code == ErrorCode.INVALID_OPERATOR

    def test_rotation_error_angle(self):
        assert rotation_error_angle(x_gate(0.01).unitary, np.eye(2)) == pytest.approx(0.01)
        assert rotation_error_angle(np.exp(0.7j) * np.eye(2), np.eye(2)) < 1e-12


class TestZXZXZ:
    """Test single-qubit decomposition into two X_{π/2} pulses."""

    def test_random_unitaries(self, rng):
        for _ in range(100):
            U = random_unitary(rng)
            dec = decompose_zxzxz(U)
            assert operator_distance(circuit_unitary(dec.sequence(), 1), U) < 1e-10
            np.testing.assert_allclose(np.exp(1j * dec.global_phase) * dec.matrix(), U, atol=1e-10)

    @pytest.mark.parametrize(
        "gate",
        [z_gate(0.7), x_gate(math.pi), y_gate(math.pi), hadamard(), np.eye(2)],
        ids=["Z", "Xpi", "Ypi", "H", "I"],
    )
    def test_edge_cases(self, gate):
        U = gate.unitary if isinstance(gate, GateOp) else gate
        dec = decompose_zxzxz(U)
        assert operator_distance(circuit_unitary(dec.sequence(), 1), U) < 1e-10

    def test_sequence_uses_two_half_pi_pulses(self):
        names = [op.name for op in decompose_zxzxz(hadamard().unitary).sequence()]
        assert names == ["Z", "X", "Z", "X", "Z"]

    def test_rejects_non_unitary(self):
        with pytest.raises(ParameterError):
            decompose_zxzxz(np.ones((2, 2)))


class TestVirtualZ:
    """Test virtual-Z compilation and scheduling."""

    def random_circuit(self, rng, length=12):
        ops = []
        for _ in range(length):
            kind = rng.integers(5)
            q = int(rng.integers(2))
            theta = float(rng.uniform(-math.pi, math.pi))
            if kind == 0:
                ops.append(x_gate(theta, q))
            elif kind == 1:
                ops.append(y_gate(theta, q))
            elif kind == 2:
                ops.append(z_gate(theta, q))
            elif kind == 3:
                ops.append(cz_phi(theta))
            else:
                ops.append(iswap_unitary(1.0, HALF_PI))
        return ops

    def test_random_circuits_match_up_to_trailing_z(self, rng):
        for _ in range(100):
            ops = self.random_circuit(rng)
            program = virtual_z_compile(ops, n_qubits=2)
            original = circuit_unitary(ops, 2)
            assert program.physical_z_count == 0
            assert operator_distance(program.equivalent_unitary(), original) < 1e-10
            # trailing Z rotations leave z-basis statistics unchanged
            psi0 = np.eye(4)[0]
            np.testing.assert_allclose(
                np.abs(program.unitary() @ psi0) ** 2, np.abs(original @ psi0) ** 2, atol=1e-10
            )

    def test_frames_swap_through_iswap(self):
        program = virtual_z_compile([z_gate(0.5, 0), iswap_unitary(1.0, HALF_PI)], n_qubits=2)
        assert program.frames == {0: 0.0, 1: 0.5}

    def test_phase_lands_on_next_pulse(self):
        program = virtual_z_compile([z_gate(0.3), x_gate(HALF_PI)])
        (op,) = program.ops
        assert op.name == "Xphi"
        assert op.params["phase"] == pytest.approx(0.3)

    def test_unsupported_gates_raise(self):
        with pytest.raises(CompileError) as exc:
            virtual_z_compile([hadamard()])
        assert exc.value.gate_name == "H"
        with pytest.raises(CompileError):
            virtual_z_compile([cnot()])

    def test_any_su2_needs_two_pulses(self, rng):
        for _ in range(20):
            U = random_unitary(rng)
            program = any_su2_sequence(U)
            assert len(program.ops) == 2
            assert all(op.name == "Xphi" for op in program.ops)
            assert operator_distance(program.equivalent_unitary(), U) < 1e-10

    def test_schedule_sequence_scales_amplitude_and_shifts_frame(self):
        reference = DrivePulse(gaussian(20.0, 5.0, amplitude=0.3))
        schedule = schedule_sequence(
            [x_gate(HALF_PI), z_gate(0.4), y_gate(math.pi)], reference, math.pi
        )
        first, second = schedule.channels["d0"]
        assert first.pulse.envelope.amplitude == pytest.approx(0.15)
        assert first.pulse.phase == pytest.approx(0.0)
        assert second.pulse.envelope.amplitude == pytest.approx(0.3)
        assert second.pulse.phase == pytest.approx(0.4 - HALF_PI)
        assert second.start == pytest.approx(20.0)
        assert schedule.phase_frames["d0"] == pytest.approx(0.4)

    def test_schedule_sequence_rejects_two_qubit_gate(self):
        reference = DrivePulse(gaussian(20.0, 5.0))
        with pytest.raises(CompileError):
            schedule_sequence([cphase()], reference, math.pi)


class TestTwoQubitMaps:
    """Test the flux maps, the 6-level Hamiltonian and ζ."""

    def test_operating_points_ordered(self, fmap):
        assert 0.6 < fmap.cphase_flux() < fmap.iswap_flux() < 0.85
        assert fmap.omega(fmap.iswap_flux()) == pytest.approx(fmap.fixed[0], abs=1e-9)

    def test_flux_outside_map_raises(self, fmap):
        with pytest.raises(ParameterError) as exc:
            fmap.omega(1.5)
        assert exc.value.code == ErrorCode.INVALID_GRID

    def test_uncoupled_hamiltonian_is_diagonal(self, fmap):
        pair = make_pair(0.0)
        H = two_excitation_hamiltonian(pair, 0.3).dense()
        np.testing.assert_allclose(H, np.diag(np.diag(H)), atol=0.0)
        np.testing.assert_allclose(np.diag(H).real, fmap.bare_energies(0.3), rtol=1e-6)

    def test_avoided_crossing_splitting(self, fmap):
        g = fmap.pair.g
        crossing = fmap.cphase_flux()
        H = two_excitation_hamiltonian(fmap.pair, crossing, fmap).dense()
        values = np.linalg.eigvalsh(H)
        e11 = fmap.bare_energies(crossing)[3]
        near = np.sort(values[np.argsort(np.abs(values - e11))[:2]])
        assert near[1] - near[0] == pytest.approx(2.0 * math.sqrt(2.0) * g, rel=0.05)

    def test_zeta_small_at_idle_and_large_at_crossing(self, zmap):
        assert abs(zmap.idle_value) < TWO_PI * 0.002
        assert abs(zmap(zmap.crossing)) > TWO_PI * 0.01
        assert zmap.relative(zmap.grid[0]) == pytest.approx(0.0, abs=1e-12)

    def test_zeta_vanishes_without_coupling(self):
        assert zeta(make_pair(0.0), 0.3) == pytest.approx(0.0, abs=1e-9)

    def test_zeta_map_interpolates_exact_values(self, zmap):
        knot = float(zmap.grid[5])
        assert zmap(knot) == pytest.approx(zeta(zmap.fmap.pair, knot, zmap.fmap), rel=1e-9)

    def test_pair_validation(self):
        with pytest.raises(ParameterError) as exc:
            TransmonPair(
                tunable=QubitCircuitParams(kind=QubitKind.TRANSMON, EC=0.25, EJ=19.5),
                fixed=QubitCircuitParams(kind=QubitKind.TRANSMON, EC=0.25, EJ=13.8),
                g=-1.0,
            )
        assert set(exc.value.field_errors) == {"tunable", "g"}


class TestIswap:
    """Test the flux-activated iSWAP."""

    def test_ideal_exchange(self):
        g = TWO_PI * 0.01
        U = iswap_unitary(g, math.pi / (2 * g)).unitary
        np.testing.assert_allclose(U[1, 2], -1j, atol=1e-12)
        np.testing.assert_allclose(U[2, 1], -1j, atol=1e-12)
        assert abs(U[1, 1]) < 1e-12
        half = iswap_unitary(g, math.pi / (4 * g)).unitary
        np.testing.assert_allclose(half @ half, U, atol=1e-12)

    def test_rejects_non_positive_coupling(self):
        with pytest.raises(ParameterError):
            iswap_unitary(0.0, 1.0)

    def test_idle_trajectory_needs_no_correction(self, weak_fmap):
        idle = FluxTrajectory(times=np.array([0.0, 50.0]), phi_e=np.array([0.0, 0.0]))
        correction = iswap_phase_correction(idle, weak_fmap)
        assert correction.theta_z == (0.0, 0.0)
        assert correction.frame_phase == 0.0
        U = simulate_iswap(idle, weak_fmap).propagator
        np.testing.assert_allclose(U, np.eye(4), atol=1e-8)

    def test_corrected_iswap_fidelity(self, weak_fmap):
        g = weak_fmap.pair.g
        tau = math.pi / (2 * g)
        trajectory = FluxTrajectory.square(0.0, weak_fmap.iswap_flux(), 0.0, tau, tau)
        report = corrected_iswap(TwoQubitFluxGateConfig(g=g, trajectory=trajectory, tau=tau), weak_fmap)
        assert report.fidelity > 1.0 - 1e-4

    def test_residual_phases_with_idle_tails(self, weak_fmap):
        g = weak_fmap.pair.g
        tau = math.pi / (2 * g)
        trajectory = FluxTrajectory.square(0.0, weak_fmap.iswap_flux(), 10.0, tau, tau + 20.0)
        correction = iswap_phase_correction(trajectory, weak_fmap)
        assert correction.t_start == pytest.approx(10.0)
        U = correction.correct(simulate_iswap(trajectory, weak_fmap).propagator)
        reference = np.angle(U[0, 0])
        for (row, col), expected in {(1, 2): -HALF_PI, (2, 1): -HALF_PI, (3, 3): 0.0}.items():
            residual = wrapped(np.angle(U[row, col]) - reference - expected)
            assert abs(residual) < 1e-3

    def test_correction_gates_match_diagonal(self):
        from qpu_pulse_sim.gates.iswap import IswapPhaseCorrection

        correction = IswapPhaseCorrection(theta_z=(0.4, -1.1), frame_phase=0.25)
        before, after = correction.gates()
        U = iswap_unitary(1.0, HALF_PI)
        composed = circuit_unitary([*before, U, *after], 2)
        assert operator_distance(composed, correction.correct(U.unitary)) < 1e-12

    def test_chevron(self, weak_fmap):
        g = weak_fmap.pair.g
        tau = math.pi / (2 * g)
        chevron = iswap_chevron(weak_fmap, [0.0, weak_fmap.iswap_flux()], [0.0, tau])
        assert chevron.population.shape == (2, 2)
        assert chevron.population[1, 0] == pytest.approx(0.0, abs=1e-12)
        assert chevron.population[1, 1] > 0.99
        assert chevron.population[0, 1] < 1e-6
        frame = chevron.to_frame()
        assert list(frame.columns) == ["phi_e_rad", "tau_ns", "P01"]
        assert len(frame) == 4

    def test_chevron_rejects_negative_times(self, weak_fmap):
        with pytest.raises(ParameterError) as exc:
            iswap_chevron(weak_fmap, [0.5], [-1.0])
        assert exc.value.code == ErrorCode.INVALID_GRID

    def test_config_validation(self):
        trajectory = FluxTrajectory.square(0.0, 0.7, 0.0, 10.0, 20.0)
        with pytest.raises(ParameterError) as exc:
            TwoQubitFluxGateConfig(g=0.1, trajectory=trajectory, tau=30.0, target="swap")
        assert set(exc.value.field_errors) == {"target", "tau"}


class TestCPhase:
    """Test CPHASE trajectories and simulation."""

    def test_trajectory_hits_target(self, zmap):
        result = cphase_trajectory(zmap, math.pi, T=60.0)
        assert abs(abs(result.conditional_phase) - math.pi) <= 1e-4
        assert 0.0 < result.hold_depth < zmap.crossing
        assert result.trajectory.duration == pytest.approx(60.0)

    def test_half_phase_needs_shallower_hold(self, zmap):
        full = cphase_trajectory(zmap, math.pi, T=60.0)
        half = cphase_trajectory(zmap, HALF_PI, T=60.0)
        assert half.hold_depth < full.hold_depth

    def test_phase_is_additive_over_concatenation(self, zmap):
        half = cphase_trajectory(zmap, HALF_PI, T=60.0)
        joined = half.trajectory.then(half.trajectory)
        total = conditional_phase_integral(joined, zmap)
        assert abs(total) == pytest.approx(math.pi, abs=5e-4)

    def test_zero_target_stays_idle(self, zmap):
        result = cphase_trajectory(zmap, 0.0, T=60.0)
        assert result.conditional_phase == 0.0
        assert np.all(result.trajectory.phi_e == 0.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"target_phase": math.pi, "T": 10.0},
            {"target_phase": -1.0, "T": 60.0},
            {"target_phase": 100.0, "T": 60.0},
            {"target_phase": math.pi, "T": 60.0, "strategy": "square"},
        ],
        ids=["too-short", "negative", "unreachable", "strategy"],
    )
    def test_invalid_requests(self, zmap, kwargs):
        with pytest.raises(ParameterError):
            cphase_trajectory(zmap, **kwargs)

    def test_unreachable_reports_maximum(self, zmap):
        with pytest.raises(ParameterError) as exc:
            cphase_trajectory(zmap, 100.0, T=60.0)
        assert exc.value.context.additional_data["max_phase"] < 100.0

    @pytest.mark.slow
    def test_simulated_phase_matches_integral(self, zmap):
        solved = cphase_trajectory(zmap, math.pi, T=60.0)
        simulation = simulate_cphase(solved.trajectory, zmap)
        assert abs(wrapped(simulation.conditional_phase - math.pi)) < 0.1
        assert simulation.leakage < 0.05
        gate = cphase_unitary(solved.trajectory, zmap, simulation=simulation)
        assert gate_fidelity(gate.unitary, cphase().unitary) > 0.99
        raw = cphase_unitary(solved.trajectory, zmap, False, simulation=simulation)
        assert raw.name == "CZ_raw"
        assert raw.is_diagonal

    def test_strategies(self):
        assert CPHASE_STRATEGIES == ("raised_cosine", "slepian")

    def test_slepian_window_shape(self):
        w = slepian_window(601)
        assert w[0] == 0.0 and w[-1] == 0.0
        assert w.max() == pytest.approx(1.0)
        assert int(np.argmax(w)) == 300
        np.testing.assert_allclose(w, w[::-1], atol=1e-12)

    def test_mixing_angle_rises_to_quarter_turn(self, zmap):
        theta = mixing_angle(zmap, zmap.grid)
        assert np.all(np.diff(theta) > 0)
        assert theta[-1] == pytest.approx(HALF_PI, abs=1e-3)

    def test_slepian_trajectory_hits_target(self, zmap):
        result = cphase_trajectory(zmap, math.pi, T=60.0, strategy="slepian")
        assert abs(abs(result.conditional_phase) - math.pi) <= 1e-4
        trajectory = result.trajectory
        assert trajectory.phi_e[0] == trajectory.phi_e[-1] == zmap.fmap.pair.idle
        assert trajectory(30.0) == pytest.approx(result.hold_depth, abs=1e-3)
        raised = cphase_trajectory(zmap, math.pi, T=60.0)
        # no flat hold, so the peak sits deeper than the raised-cosine plateau
        assert raised.hold_depth < result.hold_depth < zmap.crossing

    def test_slepian_ignores_rise(self, zmap):
        result = cphase_trajectory(zmap, 0.1, T=12.0, rise=8.0, strategy="slepian")
        assert result.trajectory.duration == pytest.approx(12.0)
        with pytest.raises(ParameterError):
            cphase_trajectory(zmap, 0.1, T=12.0, rise=8.0)

    @pytest.mark.slow
    def test_slepian_leaks_less_than_raised_cosine(self, zmap):
        leakage = {}
        for strategy in CPHASE_STRATEGIES:
            solved = cphase_trajectory(zmap, math.pi, T=60.0, strategy=strategy)
            simulation = simulate_cphase(solved.trajectory, zmap)
            assert abs(wrapped(simulation.conditional_phase - math.pi)) < 0.1
            leakage[strategy] = simulation.leakage
        assert leakage["slepian"] < leakage["raised_cosine"]


class TestCrossResonance:
    """Test effective CR coefficients, Rabi simulation and bSWAP rates."""

    G = TWO_PI * 0.005
    DELTA = TWO_PI * 0.15
    ALPHA = -TWO_PI * 0.33

    def test_effective_coefficients(self):
        params = cr_effective_params(self.G, self.DELTA, self.ALPHA, self.ALPHA, eta=0.03)
        assert params.mu_minus == pytest.approx(-0.0611, abs=1e-4)
        assert params.nu_minus == pytest.approx(0.0278, abs=1e-4)

    @pytest.mark.parametrize(
        "delta,alpha1,alpha2",
        [(0.0, -2.0, -2.0), (1.0, -1.0, -2.0), (1.0, -2.0, 1.0)],
        ids=["degenerate", "alpha1", "alpha2"],
    )
    def test_poles_raise(self, delta, alpha1, alpha2):
        with pytest.raises(RegimeError):
            cr_effective_params(0.01, delta, alpha1, alpha2)

    def test_rabi_rates_follow_effective_model(self):
        params = cr_effective_params(self.G, self.DELTA, self.ALPHA, self.ALPHA)
        omega = 0.05
        result = simulate_cr_rabi(params, omega, np.linspace(0.0, 400.0, 801))
        for measured, predicted in zip(result.rates, params.conditional_rates(omega)):
            assert measured == pytest.approx(predicted, rel=0.05)

    def test_pi_differential_near_200ns(self):
        params = cr_effective_params(self.G, self.DELTA, self.ALPHA, self.ALPHA, eta=0.03)
        result = simulate_cr_rabi(params, 0.12852, np.linspace(0.0, 400.0, 2001))
        assert 180.0 < result.time_to_differential(math.pi) < 220.0
        frame = result.to_frame()
        assert set(frame["control"]) == {0, 1}
        assert len(frame) == 2 * 2001

    def test_rabi_rejects_short_time_grid(self):
        params = cr_effective_params(self.G, self.DELTA, self.ALPHA, self.ALPHA)
        with pytest.raises(ParameterError):
            simulate_cr_rabi(params, 0.05, np.array([0.0, 1.0]))

    def test_bswap_rate_scales_with_drive_squared(self):
        args = (self.G, self.DELTA, self.ALPHA, self.ALPHA, 0.1)
        r1 = bswap_rate(0.05, *args)
        r2 = bswap_rate(0.10, *args)
        assert r2 == pytest.approx(4.0 * r1)
        assert bswap_gate_time(r1) == pytest.approx(math.pi / (2 * abs(r1)))
        assert bswap_gate_time(0.0) == math.inf

    def test_bswap_poles(self):
        with pytest.raises(RegimeError) as exc:
            bswap_rate(0.05, self.G, self.DELTA, -self.DELTA, self.ALPHA, 0.1)
        assert exc.value.pole == "alpha1=-delta12"
        with pytest.raises(RegimeError):
            bswap_rate(0.05, self.G, 0.0, self.ALPHA, self.ALPHA, 0.1)


class TestIdentities:
    """Test emitted circuits against their targets."""

    @pytest.mark.parametrize("target", sorted(IDENTITY_TARGETS))
    def test_identity_holds(self, target):
        report = synthesize_identity(target)
        assert report.passed, f"{target}: distance {report.distance:.3e}"

    @pytest.mark.parametrize("phi", [0.0, 0.3, math.pi, -2.0])
    def test_uzz_variants_for_any_angle(self, phi):
        assert synthesize_identity("uzz_from_czphi_v1", phi=phi).passed
        assert synthesize_identity("uzz_from_czphi_v2", phi=phi).passed

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_ghz_larger_registers(self, n):
        report = synthesize_identity("ghz_circuit", n_qubits=n)
        assert report.passed
        assert report.actual.shape == (2**n,)

    def test_unknown_target(self):
        with pytest.raises(ParameterError):
            synthesize_identity("toffoli")
