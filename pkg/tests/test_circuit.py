"""Tests for probe-protocol compilation and the bitwise statevector backend."""

import math

import numpy as np
import pytest

from lib.circuit import (
    MEASURE_ROTATION,
    Circuit,
    Gate,
    ShotResult,
    compile_protocol,
    dump_circuit,
    evolution_unitary,
    expectation_z0,
    expected_gate_count,
    probe_zero_probability,
    run_statevector,
    sample_shots,
)
from lib.exact import DimensionError, StateVector, basis_state, plus_state, series_diagonal
from lib.model import SpinModel, UnsupportedModelError, lift_total


class TestGate:
    def test_cnot_needs_distinct_qubits(self):
        with pytest.raises(ValueError):
            Gate("CNOT", (1, 1))

    def test_rotation_needs_angle(self):
        with pytest.raises(ValueError):
            Gate("RZ", (0,))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Gate("T", (0,))

    def test_dump(self):
        assert Gate("H", (2,)).dump() == "H 2"
        assert Gate("CNOT", (0, 3)).dump() == "CNOT 0,3"
        assert Gate("RY", (0,), -math.pi / 2).dump() == f"RY 0,{-math.pi / 2:.17g}"

    def test_circuit_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Circuit(1, (Gate("H", (1,)),))


class TestCompileProtocol:
    def test_spin_in_field_layout(self, spin_in_field):
        t = 0.3
        circuit = compile_protocol(lift_total(spin_in_field), t)
        assert [g.dump() for g in circuit.gates] == [
            "H 0",
            "H 1",
            f"RZ 0,{2 * 2.0 * t:.17g}",
            "CNOT 0,1",
            f"RZ 1,{2 * 1.0 * t:.17g}",
            "CNOT 0,1",
            f"RY 0,{MEASURE_ROTATION:.17g}",
        ]

    def test_terms_in_canonical_order(self, spin_chain):
        # strings (0,) (0,1) (0,1,2) (0,2) (0,2,3) (0,3) put their RZ on the last qubit
        circuit = compile_protocol(lift_total(spin_chain), 0.5)
        assert [g.qubits[0] for g in circuit.gates if g.kind == "RZ"] == [0, 1, 2, 2, 3, 3]
        reordered = SpinModel(spin_chain.n_qubits, spin_chain.terms[::-1], spin_chain.shift)
        assert dump_circuit(compile_protocol(lift_total(reordered), 0.5)) == dump_circuit(circuit)

    def test_gate_count(self, spin_chain):
        total = lift_total(spin_chain)
        circuit = compile_protocol(total, 1.0)
        # 4 wall + 2x(4 CNOT + RZ) + 3x(2 CNOT + RZ) + (RZ for C) + RY
        assert len(circuit.gates) == expected_gate_count(total) == 4 + 10 + 9 + 1 + 1
        assert circuit.count("CNOT") == 14

    def test_dump_is_deterministic(self, spin_chain):
        total = lift_total(spin_chain)
        first = dump_circuit(compile_protocol(total, 0.25))
        assert first == dump_circuit(compile_protocol(total, 0.25))
        assert first.endswith("\n")
        assert first.count("\n") == expected_gate_count(total)

    def test_x_terms_rejected(self, transverse_pair):
        with pytest.raises(UnsupportedModelError):
            compile_protocol(lift_total(transverse_pair), 0.1)

    def test_expectation_at_zero_is_one(self, spin_chain):
        state = run_statevector(compile_protocol(lift_total(spin_chain), 0.0))
        assert expectation_z0(state) == pytest.approx(1.0, abs=1e-12)

    def test_expectation_matches_series(self, spin_in_field):
        total = lift_total(spin_in_field)
        for t in (-1.3, -0.2, 0.4, 2.5):
            state = run_statevector(compile_protocol(total, t))
            assert expectation_z0(state) == pytest.approx(series_diagonal(total, [t])[0], abs=1e-12)

    def test_negative_time_is_inverse(self, spin_chain):
        total = lift_total(spin_chain)
        forward = evolution_unitary(compile_protocol(total, 0.6).evolution_block())
        backward = evolution_unitary(compile_protocol(total, -0.6).evolution_block())
        np.testing.assert_allclose(forward @ backward, np.eye(16), atol=1e-12)


class TestStatevector:
    def test_hadamard_wall_gives_plus_state(self):
        circuit = Circuit(3, [Gate("H", (q,)) for q in range(3)])
        np.testing.assert_allclose(run_statevector(circuit).amplitudes, plus_state(3).amplitudes)

    def test_cnot_control_is_first_qubit(self):
        circuit = Circuit(2, [Gate("CNOT", (0, 1))])
        # |01> (bit 0 set) -> |11>
        state = run_statevector(circuit, basis_state(1, 2))
        np.testing.assert_allclose(state.amplitudes, [0, 0, 0, 1])

    def test_measure_rotation_maps_x_to_z(self):
        circuit = Circuit(1, [Gate("H", (0,)), Gate("RY", (0,), MEASURE_ROTATION)])
        assert expectation_z0(run_statevector(circuit)) == pytest.approx(1.0)

    def test_width_mismatch(self):
        with pytest.raises(DimensionError):
            run_statevector(Circuit(2, []), plus_state(3))

    def test_probe_zero_probability(self):
        assert probe_zero_probability(plus_state(2)) == pytest.approx(0.5)
        assert probe_zero_probability(basis_state(2, 2)) == pytest.approx(1.0)


class TestShots:
    def test_from_counts(self):
        result = ShotResult.from_counts(4096, 2048)
        assert result.estimate == 0.0
        assert result.stderr == pytest.approx(1 / 64)

    def test_certain_outcome_has_zero_stderr(self):
        result = ShotResult.from_counts(100, 100)
        assert result.estimate == 1.0
        assert result.stderr == 0.0

    @pytest.mark.parametrize("shots, count0", [(0, 0), (10, 11), (10, -1)])
    def test_invalid_counts(self, shots, count0):
        with pytest.raises(ValueError):
            ShotResult.from_counts(shots, count0)

    def test_seeded_sampling_is_reproducible(self):
        state = plus_state(2)
        first = sample_shots(state, 1000, 42)
        assert sample_shots(state, 1000, 42) == first
        assert sample_shots(state, 1000, np.random.SeedSequence(42)) == first

    def test_deterministic_state(self):
        result = sample_shots(basis_state(0, 1), 64, 1)
        assert result.count0 == 64
        assert result.estimate == 1.0

    def test_estimator_is_unbiased(self):
        theta = 1.1
        state = StateVector(1, [math.cos(theta / 2), math.sin(theta / 2)])
        shots, runs = 256, 10_000
        estimates = np.array([sample_shots(state, shots, seed).estimate for seed in range(runs)])
        sigma = math.sqrt((1.0 - math.cos(theta) ** 2) / shots / runs)
        assert abs(estimates.mean() - math.cos(theta)) <= 4 * sigma
