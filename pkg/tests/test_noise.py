"""
Tests for the noise module.

This module contains unit tests for the noise spectra, decoherence rates,
filter functions, density-matrix decay laws, fitting and the simulated
decay experiments.
"""

import math

import numpy as np
import pytest

from qpu_pulse_sim.core.errors import ErrorCode, FitError, NumericError, ParameterError
from qpu_pulse_sim.core.units import HBAR, K_B, TWO_PI
from qpu_pulse_sim.noise import (
    EXPERIMENT_COLUMNS,
    DecoherenceRates,
    ExperimentKind,
    NoisePSD,
    PulseSequenceSpec,
    band_variance,
    bloch_redfield_rho,
    boltzmann_exponent,
    charge_matrix_element,
    coherence_decay,
    coherence_function,
    filter_function,
    fit_dephasing_decay,
    fit_exponential_decay,
    fit_model,
    fit_ramsey,
    gamma1_from_psd,
    gaussian_chi,
    lindblad_evolve,
    polarization,
    psd_eval,
    purity,
    rho_with_1f,
    simulate_decay_experiment,
    synthesize_noise,
    thermal_rates,
)

FLUX_SENSITIVITY = TWO_PI * 4e9  # rad/s per Φ₀
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)


def cpmg_reference(z, n):
    """Closed-form CPMG filter in the 1/z² convention of this package"""
    if n % 2 == 0:
        weight = 8 * np.sin(z / 4 / n) ** 4 * np.sin(z / 2) ** 2 / np.cos(z / 2 / n) ** 2
    else:
        weight = 8 * np.sin(z / 4 / n) ** 4 * np.cos(z / 2) ** 2 / np.cos(z / 2 / n) ** 2
    return 2 * weight / z**2


class TestNoisePSD:
    """Test spectral density shapes"""

    def test_flux_one_over_f_at_one_hz(self):
        """1 μΦ₀ amplitude gives (1 μΦ₀)²/Hz at 1 Hz"""
        psd = NoisePSD.one_over_f(1e-12)
        assert psd_eval(psd, TWO_PI) == pytest.approx(1e-12)
        assert psd_eval(psd, TWO_PI * 10) == pytest.approx(1e-13)
        assert psd_eval(psd, -TWO_PI) == pytest.approx(1e-12)

    def test_one_over_f_exponent(self):
        psd = NoisePSD.one_over_f(2.0, exponent=0.5)
        assert psd(TWO_PI * 4) == pytest.approx(1.0)

    def test_one_over_f_singular_at_zero(self):
        with pytest.raises(NumericError) as exc:
            psd_eval(NoisePSD.one_over_f(1e-12), 0.0)
        assert exc.value.code == ErrorCode.SINGULARITY

    def test_band_edges_remove_singularity(self):
        psd = NoisePSD.one_over_f(1e-12, omega_ir=TWO_PI, omega_uv=TWO_PI * 100)
        values = psd_eval(psd, np.array([0.0, TWO_PI * 2, TWO_PI * 1000]))
        assert values[0] == 0.0
        assert values[1] == pytest.approx(5e-13)
        assert values[2] == 0.0

    def test_ohmic_and_white(self):
        assert psd_eval(NoisePSD.ohmic(2.0), TWO_PI * 3) == pytest.approx(6.0)
        white = psd_eval(NoisePSD.white(3e-9), np.linspace(-1e6, 1e6, 5))
        np.testing.assert_allclose(white, 3e-9)

    def test_lorentzian_zero_frequency_and_cutoff(self):
        """Photon shot noise: 8ηn̄χ²/κ at DC, half of it at ω = κ"""
        chi, kappa, n_bar, eta = 1e6, 2e6, 0.1, 0.8
        psd = NoisePSD.lorentzian(chi, kappa, n_bar, eta)
        dc = psd_eval(psd, 0.0)
        assert dc == pytest.approx(8 * eta * n_bar * chi**2 / kappa)
        assert psd_eval(psd, kappa) == pytest.approx(dc / 2)

    def test_composite_is_sum(self):
        a = NoisePSD.white(1.0)
        b = NoisePSD.ohmic(2.0)
        total = a + b + NoisePSD.one_over_f(3.0)
        w = TWO_PI * 2
        assert len(total.components) == 3
        assert total(w) == pytest.approx(1.0 + 4.0 + 1.5)

    def test_serialization(self):
        psd = NoisePSD.one_over_f(1e-12, omega_ir=1.0) + NoisePSD.lorentzian(1e6, 2e6, 0.1)
        assert NoisePSD.from_dict(psd.to_dict()) == psd

    def test_invalid_parameters(self):
        with pytest.raises(ParameterError) as exc:
            NoisePSD.white(-1.0)
        assert "amplitude" in exc.value.field_errors
        with pytest.raises(ParameterError) as exc:
            NoisePSD.lorentzian(1e6, 0.0, 0.1)
        assert "kappa" in exc.value.field_errors
        with pytest.raises(ParameterError):
            NoisePSD.composite()


class TestRates:
    """Test rate bookkeeping, golden-rule and thermal rates"""

    def test_rate_relations(self):
        rates = DecoherenceRates.from_times(T1=85.0, T_phi=100.0)
        assert rates.Gamma2 == pytest.approx(1 / 170 + 1 / 100)
        assert rates.T1 == pytest.approx(85.0)
        assert rates.T2 <= 2 * rates.T1

    def test_t2_limit(self):
        rates = DecoherenceRates.from_times(T1=50.0, T2=100.0)
        assert rates.Gamma_phi == 0.0
        with pytest.raises(ParameterError) as exc:
            DecoherenceRates.from_times(T1=50.0, T2=120.0)
        assert exc.value.code == ErrorCode.INVALID_RATES

    def test_negative_dephasing_is_unphysical(self):
        with pytest.raises(ParameterError) as exc:
            DecoherenceRates(1.0, Gamma_phi=-0.1)
        assert exc.value.code == ErrorCode.INVALID_RATES

    def test_golden_rule_scaling(self):
        assert gamma1_from_psd(1e-24, 0.0) == 0.0
        single = gamma1_from_psd(1e-24, 1e-16)
        assert gamma1_from_psd(2e-24, 1e-16) == pytest.approx(4 * single)

    def test_golden_rule_matches_lindblad_decay(self):
        """Γ₁ from the charge matrix element reproduces a σ₋ Lindblad decay"""
        element = charge_matrix_element(EC=0.25, n01=1.2)
        gamma_us = gamma1_from_psd(element, 1e-16) * 1e-6
        assert 0.005 < gamma_us < 0.1
        t = np.linspace(0.0, 4.0 / gamma_us, 101)
        rho = lindblad_evolve(np.zeros((2, 2)), np.array([0.0, 1.0]), [SIGMA_MINUS], t, [gamma_us])
        fit = fit_exponential_decay(t, rho[:, 1, 1].real)
        assert fit.params["gamma"] == pytest.approx(gamma_us, rel=0.03)

    def test_thermal_zero_temperature(self):
        assert thermal_rates(TWO_PI * 5, 0.0, 0.01) == (0.0, 1.0)

    def test_thermal_operating_point(self):
        """5 GHz at 20 mK: ħω/k_BT ≈ 12"""
        x = boltzmann_exponent(TWO_PI * 5, 0.020)
        assert x == pytest.approx(12.0, abs=0.01)
        up, _ = thermal_rates(TWO_PI * 5, 0.020, 1.0)
        assert 5e-6 < up < 7e-6

    def test_thermal_polarization(self):
        T = HBAR * TWO_PI * 5e9 / (2 * K_B)
        _, p = thermal_rates(TWO_PI * 5, T, 1.0)
        assert p == pytest.approx(math.tanh(1.0))

    def test_negative_temperature(self):
        with pytest.raises(ParameterError):
            thermal_rates(TWO_PI * 5, -0.01, 1.0)


class TestFilterFunction:
    """Test dynamical-decoupling filter functions"""

    x = np.logspace(-2, 2, 400)

    def test_ramsey_closed_form(self):
        seq = PulseSequenceSpec.ramsey(1.0)
        values = filter_function(seq, self.x / 1e-6)
        expected = np.sinc(self.x / 2 / np.pi) ** 2
        np.testing.assert_allclose(values, expected, rtol=0, atol=1e-10)

    def test_hahn_closed_form(self):
        seq = PulseSequenceSpec.hahn(2.0)
        values = filter_function(seq, self.x / 2e-6)
        expected = np.sin(self.x / 4) ** 2 * np.sinc(self.x / 4 / np.pi) ** 2
        np.testing.assert_allclose(values, expected, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 4, 8])
    def test_cpmg_closed_form(self, n):
        z = np.logspace(-1, 2, 200) * 1.0137
        values = filter_function(PulseSequenceSpec.cpmg(n, 1.0), z / 1e-6)
        np.testing.assert_allclose(values, cpmg_reference(z, n), rtol=1e-6, atol=1e-10)

    def test_zero_frequency_limits(self):
        assert filter_function(PulseSequenceSpec.ramsey(1.0), 0.0) == 1.0
        assert filter_function(PulseSequenceSpec.hahn(1.0), 0.0) == pytest.approx(0.0, abs=1e-15)
        assert filter_function(PulseSequenceSpec.cpmg(4, 1.0), 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_finite_pulse_width(self):
        """A finite π pulse modifies the filter away from DC only"""
        ideal = PulseSequenceSpec.hahn(1.0)
        wide = PulseSequenceSpec.hahn(1.0, tau_pi=0.05)
        assert filter_function(wide, 0.0) == filter_function(ideal, 0.0)
        assert filter_function(wide, 3e6) != pytest.approx(filter_function(ideal, 3e6))
        assert wide.total_length == pytest.approx(1.05)

    def test_centroid_shifts_with_pulse_number(self):
        omega = np.linspace(1e4, 2e8, 40001)
        peaks = [
            omega[np.argmax(filter_function(PulseSequenceSpec.cpmg(n, 1.0), omega))]
            for n in (1, 2, 4, 8, 16)
        ]
        assert all(b > a for a, b in zip(peaks, peaks[1:]))

    def test_sequence_validation(self):
        with pytest.raises(ParameterError) as exc:
            PulseSequenceSpec((0.6, 0.4), 1.0)
        assert "sequence" in exc.value.field_errors
        with pytest.raises(ParameterError):
            PulseSequenceSpec((0.5,), 0.0)
        assert PulseSequenceSpec.cpmg(4, 1.0).delta == (0.125, 0.375, 0.625, 0.875)


class TestCoherence:
    """Test the filtered dephasing integral"""

    def test_zero_spectrum(self):
        seq = PulseSequenceSpec.ramsey(10.0)
        assert coherence_decay(NoisePSD.white(0.0), seq, 1e9) == 1.0
        assert coherence_decay(NoisePSD.one_over_f(1e-12), seq, 0.0) == 1.0

    def test_white_noise_is_exponential(self):
        """χ ∝ τ with slope (∂ω/∂λ)²S₀/2"""
        level, sensitivity = 1e-12, 1e9
        taus = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
        chi = np.array(
            [coherence_function(NoisePSD.white(level), PulseSequenceSpec.ramsey(tau), sensitivity) for tau in taus]
        )
        per_tau = chi / taus
        np.testing.assert_allclose(per_tau, per_tau.mean(), rtol=1e-3)
        assert per_tau.mean() == pytest.approx(sensitivity**2 * level / 2 * 1e-6, rel=0.02)

    def test_one_over_f_ramsey_is_quasi_gaussian(self):
        """χ grows close to τ² for 1/f noise"""
        psd = NoisePSD.one_over_f(1e-12)
        chi_short = coherence_function(psd, PulseSequenceSpec.ramsey(1.0), FLUX_SENSITIVITY)
        chi_long = coherence_function(psd, PulseSequenceSpec.ramsey(100.0), FLUX_SENSITIVITY)
        slope = math.log(chi_long / chi_short) / math.log(100.0)
        assert 1.85 < slope < 2.0

    def test_echo_suppresses_one_over_f(self):
        psd = NoisePSD.one_over_f(1e-12)
        ramsey = coherence_function(psd, PulseSequenceSpec.ramsey(10.0), FLUX_SENSITIVITY)
        echo = coherence_function(psd, PulseSequenceSpec.hahn(10.0), FLUX_SENSITIVITY)
        assert echo < ramsey / 5


class TestDensityMatrix:
    """Test the density-matrix decay laws"""

    def test_initial_state(self):
        alpha, beta = 0.6, 0.8j
        rates = DecoherenceRates.from_times(T1=10.0, T2=15.0)
        rho = bloch_redfield_rho(alpha, beta, rates, 0.3, 0.0)
        state = np.array([alpha, beta])
        np.testing.assert_allclose(rho, np.outer(state, state.conj()), atol=1e-15)

    def test_long_time_limit(self):
        rates = DecoherenceRates.from_times(T1=10.0, T2=15.0)
        rho = bloch_redfield_rho(0.6, 0.8j, rates, 0.3, 1e6)
        np.testing.assert_allclose(rho, np.diag([1.0, 0.0]), atol=1e-12)

    def test_excited_population_at_t1(self):
        rates = DecoherenceRates.from_times(T1=85.0)
        rho = bloch_redfield_rho(0.0, 1.0, rates, 0.0, 85.0)
        assert rho[1, 1].real == pytest.approx(math.exp(-1))
        assert polarization(rho) == pytest.approx(1 - 2 * math.exp(-1))

    def test_positivity_and_trace(self, rng):
        t = np.linspace(0.0, 500.0, 201)
        for _ in range(50):
            gamma1 = rng.uniform(1e-3, 1.0)
            rates = DecoherenceRates(gamma1, Gamma_phi=rng.uniform(0.0, 1.0))
            theta, phi = rng.uniform(0, np.pi), rng.uniform(0, TWO_PI)
            rho = bloch_redfield_rho(
                math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2), rates, rng.normal(), t
            )
            assert np.linalg.eigvalsh(rho).min() >= -1e-12
            np.testing.assert_allclose(np.trace(rho, axis1=1, axis2=2), 1.0, atol=1e-12)
            assert np.all(purity(rho) <= 1.0 + 1e-12)

    def test_matches_lindblad_oracle(self):
        """σ₋ and σ_z collapse operators reproduce the Bloch-Redfield matrix"""
        rates = DecoherenceRates.from_times(T1=20.0, T_phi=30.0)
        delta = TWO_PI * 0.1
        alpha, beta = 0.6, 0.8j
        t = np.linspace(0.0, 60.0, 13)
        oracle = lindblad_evolve(
            np.diag([0.0, delta]),
            np.array([alpha, beta]),
            [SIGMA_MINUS, np.diag([1.0, -1.0])],
            t,
            [rates.Gamma1, rates.Gamma_phi / 2],
        )
        np.testing.assert_allclose(bloch_redfield_rho(alpha, beta, rates, delta, t), oracle, atol=1e-7)

    def test_unnormalized_state(self):
        with pytest.raises(ParameterError):
            bloch_redfield_rho(1.0, 1.0, DecoherenceRates(0.1), 0.0, 1.0)

    def test_one_over_f_reduces_to_bloch_redfield(self):
        t = np.linspace(0.0, 200.0, 41)
        a = rho_with_1f(0.6, 0.8, 1 / 85, np.zeros_like(t), 0.2, t)
        b = bloch_redfield_rho(0.6, 0.8, DecoherenceRates(1 / 85), 0.2, t)
        np.testing.assert_allclose(a, b, atol=1e-15)

    def test_gaussian_ramsey_envelope(self):
        """T₁ = 85 μs with T_φ,G = 98 μs"""
        t = np.linspace(0.0, 300.0, 61)
        amp = 1 / math.sqrt(2)
        rho = rho_with_1f(amp, amp, 1 / 85, gaussian_chi(98.0), 0.0, t)
        envelope = 2 * np.abs(rho[:, 0, 1])
        np.testing.assert_allclose(envelope, np.exp(-t / 170) * np.exp(-((t / 98) ** 2)), rtol=1e-12)

    def test_purity_decreases_under_pure_dephasing(self):
        t = np.linspace(0.0, 5 * 85.0, 101)
        amp = 1 / math.sqrt(2)
        values = purity(rho_with_1f(amp, amp, 0.0, gaussian_chi(98.0), 0.0, t))
        assert np.all(np.diff(values) <= 1e-12)

    def test_chi_shape_mismatch(self):
        with pytest.raises(ParameterError):
            rho_with_1f(1.0, 0.0, 0.01, np.zeros(3), 0.0, np.linspace(0, 1, 5))


class TestFitting:
    """Test decay fits and model selection"""

    t = np.linspace(0.0, 300.0, 64)

    def test_exponential_recovery(self, rng):
        y = 0.1 - 0.9 * np.exp(-self.t / 60.0) + rng.normal(0, 1e-3, self.t.size)
        fit = fit_exponential_decay(self.t, y)
        assert fit.decay_time == pytest.approx(60.0, rel=0.01)
        low, high = fit.ci95["gamma"]
        assert low < fit.params["gamma"] < high
        assert high - low < 0.05 / 60.0

    def test_selects_gaussian_envelope(self, rng):
        y = -np.exp(-self.t / 170.0 - (self.t / 98.0) ** 2) + rng.normal(0, 1e-3, self.t.size)
        fit = fit_dephasing_decay(self.t, y)
        assert fit.model == "gaussian_exponential"
        assert abs(fit.params["sigma"]) == pytest.approx(1 / 98.0, rel=0.03)

    def test_selects_exponential_envelope(self, rng):
        y = -np.exp(-self.t / 80.0) + rng.normal(0, 1e-3, self.t.size)
        fit = fit_dephasing_decay(self.t, y)
        assert fit.decay_time == pytest.approx(80.0, rel=0.02)

    def test_ramsey_frequency(self):
        t = np.linspace(0.0, 150.0, 301)
        omega = TWO_PI * 0.05
        y = -np.exp(-t / 60.0) * np.cos(omega * t)
        fit = fit_ramsey(t, y)
        assert fit.params["omega"] == pytest.approx(omega, rel=0.01)
        assert fit.decay_time == pytest.approx(60.0, rel=0.01)

    def test_fit_failure_keeps_residuals(self):
        y = np.full(self.t.size, np.nan)
        with pytest.raises(FitError) as exc:
            fit_model("exponential", self.t, y, [0.0, 1.0, 0.01])
        assert exc.value.code == ErrorCode.FIT_FAILURE
        assert exc.value.residuals is not None


class TestDecayExperiments:
    """Test the simulated decay experiments"""

    def test_t1_recovery(self):
        truth = DecoherenceRates.from_times(T1=85.0)
        result = simulate_decay_experiment("t1", truth, np.linspace(0.0, 400.0, 64))
        assert result.polarization[0] == pytest.approx(-1.0)
        assert result.decay_time == pytest.approx(85.0, rel=0.01)
        assert "T1_us" in result.report()

    def test_resonant_ramsey_is_flat(self):
        result = simulate_decay_experiment(
            ExperimentKind.RAMSEY, DecoherenceRates(0.0), np.linspace(0.0, 10.0, 21)
        )
        np.testing.assert_allclose(result.polarization, -1.0, atol=1e-12)

    def test_detuned_ramsey(self):
        truth = DecoherenceRates.from_times(T1=85.0, T_phi=100.0)
        result = simulate_decay_experiment(
            "ramsey", truth, np.linspace(0.0, 150.0, 301), delta_omega=TWO_PI * 0.05
        )
        assert result.fit.params["omega"] == pytest.approx(TWO_PI * 0.05, rel=0.01)
        assert result.decay_time == pytest.approx(truth.T2, rel=0.02)

    def test_echo_refocuses_detuning(self):
        truth = DecoherenceRates.from_times(T1=85.0, T_phi=100.0)
        t = np.linspace(0.0, 200.0, 41)
        result = simulate_decay_experiment("hahn", truth, t, delta_omega=TWO_PI * 0.05)
        np.testing.assert_allclose(result.polarization, -np.exp(-truth.Gamma2 * t), atol=1e-12)

    def test_shot_noise_and_frame(self, rng):
        truth = DecoherenceRates.from_times(T1=40.0)
        result = simulate_decay_experiment("t1", truth, np.linspace(0.0, 200.0, 32), shots=1000, rng=rng)
        frame = result.to_frame()
        assert list(frame.columns) == EXPERIMENT_COLUMNS
        assert len(frame) == 32
        assert np.all(np.abs(frame["polarization"]) <= 1.0)
        assert frame["stderr"].max() <= 2 * math.sqrt(0.25 / 1000) + 1e-12

    def test_seeded_shots_are_reproducible(self):
        truth = DecoherenceRates.from_times(T1=40.0)
        t = np.linspace(0.0, 200.0, 16)
        a = simulate_decay_experiment("t1", truth, t, shots=100, rng=np.random.default_rng(7))
        b = simulate_decay_experiment("t1", truth, t, shots=100, rng=np.random.default_rng(7))
        np.testing.assert_array_equal(a.polarization, b.polarization)

    @pytest.mark.parametrize(
        "grid,kwargs",
        [
            (np.array([3.0, 2.0, 1.0, 0.5]), {}),
            (np.linspace(0, 1, 3), {}),
            (np.linspace(0, 1, 10), {"shots": 0}),
        ],
    )
    def test_invalid_grid(self, grid, kwargs):
        with pytest.raises(ParameterError) as exc:
            simulate_decay_experiment("t1", DecoherenceRates(0.1), grid, **kwargs)
        assert exc.value.code == ErrorCode.INVALID_GRID

    def test_fit_recovery_over_random_truths(self, rng):
        """T₁ and T_φ within 5 % at 10⁴ shots and 64 points"""
        for _ in range(50):
            T1 = rng.uniform(20.0, 150.0)
            T_phi = rng.uniform(T1 / 5, 2 * T1)
            truth = DecoherenceRates.from_times(T1=T1, T_phi=T_phi)
            t1 = simulate_decay_experiment(
                "t1", truth, np.linspace(0.0, 4 * T1, 64), shots=10_000, rng=rng
            ).decay_time
            t2 = simulate_decay_experiment(
                "hahn", truth, np.linspace(0.0, 4 * truth.T2, 64), shots=10_000, rng=rng
            ).decay_time
            assert t1 == pytest.approx(T1, rel=0.05)
            assert t2 == pytest.approx(truth.T2, rel=0.05)
            assert 1 / (1 / t2 - 1 / (2 * t1)) == pytest.approx(T_phi, rel=0.05)

    @pytest.mark.slow
    def test_cpmg_extends_t2_under_flux_noise(self):
        """T₂(N) increases with the CPMG pulse number towards 2T₁"""
        truth = DecoherenceRates.from_times(T1=85.0)
        psd = NoisePSD.one_over_f(1e-12)
        t = np.linspace(1.0, 300.0, 48)
        t2 = [
            simulate_decay_experiment(
                "cpmg", truth, t, psd=psd, dOmega_dLambda=FLUX_SENSITIVITY, n_pulses=n
            ).decay_time
            for n in (1, 2, 4, 8, 16)
        ]
        assert all(b > a for a, b in zip(t2, t2[1:]))
        assert t2[-1] < 2 * 85.0


class TestSynthesis:
    """Test time-domain noise synthesis"""

    psd = NoisePSD.one_over_f(1e-12, omega_ir=TWO_PI * 1.0, omega_uv=TWO_PI * 100.0)
    n, dt = 2**16, 1e-3

    def test_band_variance_matches_integral(self):
        expected = 2 * 1e-12 * math.log(100.0)
        assert band_variance(self.psd, self.n, self.dt) == pytest.approx(expected, rel=0.01)

    def test_wiener_khintchine(self, rng):
        samples = synthesize_noise(self.psd, self.n, self.dt, n_realizations=32, rng=rng)
        assert samples.shape == (32, self.n)
        assert np.isrealobj(samples)
        assert np.var(samples) == pytest.approx(2 * 1e-12 * math.log(100.0), rel=0.02)
        assert np.abs(samples.mean(axis=1)).max() < 1e-12

    def test_invalid_grid(self):
        with pytest.raises(ParameterError):
            synthesize_noise(self.psd, 1, self.dt)
