"""
Probe Spectroscopy - Circuit Protocol
Gate-level realization of the probe protocol for Z-only total models and a
bitwise statevector backend to run it.

Conventions:
    RZ(theta) = exp(-i theta Z / 2), RY(theta) = exp(-i theta Y / 2)
    qubit q is bit q of the statevector index (probe = qubit 0 = bit 0)
"""

import math
from dataclasses import dataclass

import numpy as np

from lib.config import DENSE_QUBIT_CAP
from lib.exact import DimensionError, StateVector
from lib.model import UnsupportedModelError

GATE_KINDS = ("H", "RY", "RZ", "CNOT")

# exp(+i pi Y / 4): maps <X_0> before onto <Z_0> after
MEASURE_ROTATION = -math.pi / 2

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    angle: float = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        expected = 2 if self.kind == "CNOT" else 1
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind} takes {expected} qubit(s), got {self.qubits}")
        if self.kind == "CNOT" and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"CNOT control and target must differ, got {self.qubits}")
        if self.kind in ("RY", "RZ") and self.angle is None:
            raise ValueError(f"{self.kind} needs an angle")

    def dump(self):
        parts = [str(q) for q in self.qubits]
        if self.angle is not None:
            parts.append(f"{self.angle:.17g}")
        return f"{self.kind} {','.join(parts)}"


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple
    measured_qubit: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.width:
                    raise ValueError(f"gate {gate.dump()} references qubit {q} outside width {self.width}")

    def evolution_block(self):
        """Gates between the Hadamard wall and the measurement rotation."""
        return Circuit(self.width, self.gates[self.width:-1], self.measured_qubit)

    def count(self, kind):
        return sum(1 for gate in self.gates if gate.kind == kind)


@dataclass(frozen=True)
class ShotResult:
    shots: int
    count0: int
    estimate: float
    stderr: float

    @classmethod
    def from_counts(cls, shots, count0):
        if shots < 1:
            raise ValueError(f"shots must be >= 1, got {shots}")
        if not 0 <= count0 <= shots:
            raise ValueError(f"count0 must lie in [0, {shots}], got {count0}")
        estimate = 2.0 * count0 / shots - 1.0
        stderr = math.sqrt(max(0.0, 1.0 - estimate * estimate) / shots)
        return cls(shots, count0, estimate, stderr)


def _canonical_terms(terms):
    return sorted(terms, key=lambda term: (term.string.qubits, term.coefficient))


def compile_protocol(total, t):
    """
    Compile the probe protocol for one evolution time.

    Layout: H on every qubit, then per term a CNOT ladder onto the highest
    qubit of its Z-string, RZ(2at) there, the reversed ladder, and finally the
    measurement rotation on the probe. Z-terms commute, so the evolution block
    equals exp(-i H_T t) exactly.

    Terms run in ascending order of their qubit tuples, then coefficient, so
    the shift term (C, Z_0) comes before Z_0 Z_1 and every longer string.

    Args:
        total: TotalModel with Z-only terms
        t: evolution time (negative times give negative angles)

    Returns:
        Circuit
    """
    if not total.is_diagonal:
        raise UnsupportedModelError("circuit compilation supports Z-only models; use the dense engine")

    width = total.n_qubits
    gates = [Gate("H", (q,)) for q in range(width)]
    for term in _canonical_terms(total.total_terms):
        qubits = term.string.qubits
        ladder = [Gate("CNOT", (qubits[i], qubits[i + 1])) for i in range(len(qubits) - 1)]
        gates += ladder
        gates.append(Gate("RZ", (qubits[-1],), 2.0 * term.coefficient * t))
        gates += ladder[::-1]
    gates.append(Gate("RY", (0,), MEASURE_ROTATION))
    return Circuit(width, gates, measured_qubit=0)


def expected_gate_count(total):
    """Regression count: sum over terms of 2(|S|-1) CNOTs + 1 RZ, plus N+2 wall/rotation gates."""
    body = sum(2 * (len(term.string.qubits) - 1) + 1 for term in total.total_terms)
    return body + total.n_qubits + 1


def dump_circuit(circuit):
    return "\n".join(gate.dump() for gate in circuit.gates) + "\n"


def _apply_1q(amps, matrix, q):
    idx = np.arange(amps.shape[0])
    lo = idx[((idx >> q) & 1) == 0]
    hi = lo | (1 << q)
    a0, a1 = amps[lo], amps[hi]
    amps[lo] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    amps[hi] = matrix[1, 0] * a0 + matrix[1, 1] * a1


def _apply_rz(amps, q, theta):
    idx = np.arange(amps.shape[0])
    phase = np.where(((idx >> q) & 1) == 0, np.exp(-0.5j * theta), np.exp(0.5j * theta))
    amps *= phase.reshape((-1,) + (1,) * (amps.ndim - 1))


def _apply_cnot(amps, control, target):
    idx = np.arange(amps.shape[0])
    src = idx[(((idx >> control) & 1) == 1) & (((idx >> target) & 1) == 0)]
    dst = src | (1 << target)
    amps[src], amps[dst] = amps[dst], amps[src].copy()


def _ry(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _apply_gates(amps, gates):
    for gate in gates:
        if gate.kind == "H":
            _apply_1q(amps, _HADAMARD, gate.qubits[0])
        elif gate.kind == "RY":
            _apply_1q(amps, _ry(gate.angle), gate.qubits[0])
        elif gate.kind == "RZ":
            _apply_rz(amps, gate.qubits[0], gate.angle)
        else:
            _apply_cnot(amps, *gate.qubits)
    return amps


def run_statevector(circuit, initial=None):
    """
    Apply the circuit gate by gate.

    Args:
        circuit: Circuit to execute
        initial: StateVector (defaults to |0...0>)

    Returns:
        StateVector: final state
    """
    if initial is None:
        amps = np.zeros(2 ** circuit.width, dtype=complex)
        amps[0] = 1.0
    else:
        if initial.n_qubits != circuit.width:
            raise DimensionError(f"circuit width {circuit.width} != state width {initial.n_qubits}")
        amps = initial.amplitudes.copy()

    norm_before = np.vdot(amps, amps).real
    _apply_gates(amps, circuit.gates)
    if abs(np.vdot(amps, amps).real - norm_before) > 1e-12:
        raise RuntimeError("statevector norm drifted during execution")
    return StateVector(circuit.width, amps)


def evolution_unitary(circuit):
    """Dense unitary of a circuit (columns are images of basis states)."""
    if circuit.width > DENSE_QUBIT_CAP:
        raise DimensionError(f"{circuit.width} qubits exceeds the dense cap of {DENSE_QUBIT_CAP}")
    return _apply_gates(np.eye(2 ** circuit.width, dtype=complex), circuit.gates)


def probe_zero_probability(state):
    probs = np.abs(state.amplitudes) ** 2
    idx = np.arange(probs.size)
    return float(probs[(idx & 1) == 0].sum())


def expectation_z0(state):
    """<Z_0> = P(probe = 0) - P(probe = 1)."""
    probs = np.abs(state.amplitudes) ** 2
    idx = np.arange(probs.size)
    return float(probs[(idx & 1) == 0].sum() - probs[(idx & 1) == 1].sum())


def sample_shots(state, shots, seed):
    """
    Emulate `shots` projective probe measurements.

    Args:
        state: StateVector after the measurement rotation
        shots: number of repetitions (>= 1)
        seed: int or numpy.random.SeedSequence; no global generator is used

    Returns:
        ShotResult
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p0 = min(1.0, max(0.0, probe_zero_probability(state)))
    rng = np.random.default_rng(seed)
    return ShotResult.from_counts(shots, int(rng.binomial(shots, p0)))
