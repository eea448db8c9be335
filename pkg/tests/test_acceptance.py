"""End-to-end reproduction runs and numerical guarantees of the probe method."""

import math
from pathlib import Path

import numpy as np
import pytest
from scipy import linalg

from evaluate_oracle import draw_cases
from lib.circuit import compile_protocol, evolution_unitary, expectation_z0, run_statevector, sample_shots
from lib.exact import SpectralCoefficients, pauli_to_dense, plus_state, series_diagonal, sigma_probe
from lib.model import lift_total
from lib.oracle import brute_energies, compare
from lib.runner import RunConfig, run_pipeline, run_soundness_case
from lib.spectro import TimeSeries, dft_spectrum, kernel_closed_form, sinc_spectrum

TAU = math.pi / 12


def run(models_dir, tmp_path, name, **overrides):
    config = RunConfig(model_path=str(models_dir / f"{name}.json"), output_dir=str(tmp_path), **overrides)
    return run_pipeline(config)


def centers(report):
    return [p.omega_center for p in report.peaks]


class TestSpinInField:
    def test_peaks_and_energies(self, models_dir, tmp_path):
        result = run(models_dir, tmp_path, "spin_in_field")
        assert centers(result.report) == pytest.approx([-6.0, -2.0, 2.0, 6.0], abs=0.05)
        assert result.report.energies_inner == pytest.approx([-1.0, 1.0], abs=0.05)
        assert result.series.T == pytest.approx(8 * math.pi)

    def test_equal_weights(self, models_dir, tmp_path):
        # g = 1/4 for each of the four levels of H_T
        result = run(models_dir, tmp_path, "spin_in_field")
        expected = 0.25 * result.series.T / math.pi
        for peak in result.report.peaks:
            assert peak.amplitude == pytest.approx(expected, rel=0.1)


class TestSpinChain:
    def test_shift_six_with_alias_images(self, models_dir, tmp_path):
        result = run(models_dir, tmp_path, "spin_chain_c6", extend_past_nyquist=True, oracle=True, strict=True)
        report = result.report
        # fold images at +-2 and +-18 sit beside the levels; no sidelobe survives
        assert centers(report) == pytest.approx([-22, -18, -14, -10, -6, -2, 2, 6, 10, 14, 18, 22], abs=0.05)
        assert report.energies_inner == pytest.approx([-3.0, -1.0, 1.0, 5.0], abs=0.05)
        assert report.alternate_energies_inner == pytest.approx([-5.0, 3.0], abs=0.05)
        assert result.comparison.ok
        assert result.exit_code == 0
        # 22 and -2 are one alias period 24 apart, so either may be the direct peak
        assert any(abs(hi - 22) < 0.05 and abs(lo + 2) < 0.05 for hi, lo in report.alias_pairs)
        assert any("Nyquist" in w for w in report.warnings)

    def test_shift_four_alias_free(self, models_dir, tmp_path):
        result = run(models_dir, tmp_path, "spin_chain", tau=math.pi / 48, n_max=384, threshold=0.25,
                     oracle=True, strict=True)
        assert result.series.T == pytest.approx(8 * math.pi)
        assert result.report.energies_inner == pytest.approx([-3.0, -1.0, 1.0, 5.0], abs=0.05)
        assert result.comparison.ok
        assert result.exit_code == 0


class TestKernelIdentity:
    def test_random_cosine_sets(self, rng):
        n_max = 96
        omegas = np.linspace(-12, 12, 2000)
        t = np.arange(-n_max, n_max + 1) * TAU
        for case in range(20):
            count = int(rng.integers(1, 9))
            levels = rng.uniform(-6, 6, size=count)
            # land some levels exactly on a grid pole, directly or one alias period away
            if case % 4 == 0:
                levels[0] = omegas[int(rng.integers(0, 2000))] / 2
            if case % 4 == 1:
                levels[0] = (omegas[int(rng.integers(0, 2000))] + 24.0) / 2
            weights = rng.dirichlet(np.ones(count))
            series = TimeSeries(TAU, n_max, np.cos(2.0 * np.outer(t, levels)) @ weights)
            coeffs = SpectralCoefficients(np.concatenate([levels, -levels]),
                                          np.concatenate([weights, weights]) / 2.0)
            spectrum = dft_spectrum(series, omegas)
            expected = kernel_closed_form(coeffs, omegas, TAU, n_max)
            assert np.max(np.abs(spectrum.values - expected)) <= 1e-12


class TestSincLimit:
    def test_error_is_second_order(self):
        # A(t) = cos 2t; at these nodes cos((w -/+ 2)T) = 0, leaving the tau^2 term
        coeffs = SpectralCoefficients([1.0, -1.0], [0.5, 0.5])
        T = 8 * math.pi
        nodes = 2.0 + (np.arange(4, 32) + 0.5) / 8.0

        def max_error(tau):
            n_max = int(round(T / tau))
            return np.max(np.abs(kernel_closed_form(coeffs, nodes, tau, n_max) - sinc_spectrum(coeffs, nodes, T)))

        assert max_error(math.pi / 12) / max_error(math.pi / 24) >= 3.5


class TestCircuitEquivalence:
    def test_expectation_matches_series(self, rng, random_model):
        for _ in range(50):
            total = lift_total(random_model(rng, int(rng.integers(1, 5)), int(rng.integers(1, 6))))
            t = float(rng.uniform(-3, 3))
            state = run_statevector(compile_protocol(total, t))
            assert abs(expectation_z0(state) - series_diagonal(total, [t])[0]) <= 1e-10

    def test_unitary_matches_exponential(self, rng, random_model):
        for _ in range(20):
            total = lift_total(random_model(rng, int(rng.integers(1, 4)), int(rng.integers(1, 6))))
            t = float(rng.uniform(-3, 3))
            U = evolution_unitary(compile_protocol(total, t).evolution_block())
            V = linalg.expm(-1j * t * pauli_to_dense(total).entries)
            phase = np.trace(V.conj().T @ U) / U.shape[0]
            assert abs(abs(phase) - 1.0) <= 1e-10
            np.testing.assert_allclose(U, phase * V, atol=1e-10)


class TestAnticommutation:
    @pytest.mark.parametrize("axis", ["X", "Y"])
    def test_probe_anticommutes_with_total(self, rng, random_model, axis):
        for _ in range(20):
            model = random_model(rng, int(rng.integers(1, 5)), int(rng.integers(1, 7)), diagonal=False)
            H_T = pauli_to_dense(lift_total(model)).entries
            sigma = sigma_probe(axis, model.n_qubits + 1)
            assert np.max(np.abs(sigma @ H_T + H_T @ sigma)) <= 1e-12


class TestShotNoise:
    def test_three_sigma_coverage(self):
        shots = 4096
        state = plus_state(1)
        errors = np.array([abs(sample_shots(state, shots, seed).estimate) for seed in range(1000)])
        assert np.mean(errors <= 3 / math.sqrt(shots)) >= 0.99

    def test_end_to_end_run(self, models_dir, tmp_path):
        result = run(models_dir, tmp_path, "spin_in_field", engine="shots", shots=4096, seed=7)
        assert result.report.energies_inner == pytest.approx([-1.0, 1.0], abs=0.1)
        assert centers(result.report) == pytest.approx([-6.0, -2.0, 2.0, 6.0], abs=0.1)
        assert 0 < result.spectrum.noise_floor < 0.1


@pytest.mark.slow
class TestOracleSoundness:
    def test_random_ising_models(self):
        for model, plan in draw_cases(20, 5, seed=2024):
            comparison, _ = run_soundness_case(model, plan)
            assert comparison.missed == [], model.name
            assert comparison.spurious == [], model.name
            assert len(comparison.matched) == len(brute_energies(model))


class TestDeterminism:
    def test_repeated_runs_are_byte_identical(self, models_dir, tmp_path):
        outputs = []
        for name in ("first", "second"):
            result = run(models_dir, tmp_path / name, "spin_in_field", engine="shots", shots=1024, seed=11)
            outputs.append({key: Path(path).read_bytes() for key, path in result.paths.items()})
        assert outputs[0] == outputs[1]

    def test_oracle_agrees_for_bundled_chain(self, spin_chain):
        levels = brute_energies(spin_chain)
        assert compare([-3.0, -1.0, 1.0, 5.0], levels.energies, 0.05).ok
