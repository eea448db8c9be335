"""
Probe Spectroscopy - Exact Engines
Closed-form probe expectation <X_0(t)> by diagonal enumeration (Z-only models)
or dense eigendecomposition (any Pauli model), and the spectral weights g_j.

Identity used throughout: X_0 anticommutes with H_T, so
<psi(t)|X_0|psi(t)> = <psi0|X_0 exp(-2i H_T t)|psi0> = sum_j g_j exp(-2i w_j t).
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import expm_multiply

from lib.config import CROSS_CHECK_TOL, DEGENERACY_TOL, DENSE_QUBIT_CAP, HERMITIAN_TOL, NORM_TOL
from lib.model import PauliString, TotalModel, diagonal_energies


class DimensionError(ValueError):
    """Dense cap exceeded or operand sizes disagree."""


class CrossCheckError(RuntimeError):
    """Two independent evaluation routes disagree."""


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n_qubits,):
            raise DimensionError(f"expected {2 ** self.n_qubits} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm:.12g})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self):
        return 2 ** self.n_qubits


@dataclass(frozen=True, eq=False)
class DenseHermitian:
    n_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        dim = 2 ** self.n_qubits
        if entries.shape != (dim, dim):
            raise DimensionError(f"expected a {dim}x{dim} matrix, got shape {entries.shape}")
        scale = max(1.0, float(np.max(np.abs(entries), initial=0.0)))
        if np.max(np.abs(entries - entries.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self):
        return 2 ** self.n_qubits


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    """Frequencies w_j (levels of H_T) and complex weights g_j."""

    omegas: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omegas", np.asarray(self.omegas, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=complex))
        if self.omegas.shape != self.weights.shape:
            raise DimensionError("omegas and weights must have the same length")

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        return cls([w for w, _ in pairs], [g for _, g in pairs])

    def __len__(self):
        return len(self.omegas)

    def total(self):
        """Series value at t = 0."""
        return complex(self.weights.sum())

    def evaluate(self, times):
        """sum_j g_j exp(-2i w_j t) for each t."""
        times = np.asarray(times, dtype=float)
        return np.exp(-2j * np.outer(times, self.omegas)) @ self.weights


# Pauli strings act as signed permutations: P|k> = phase[k] |k ^ flip>
def pauli_action(string, n_qubits):
    k = np.arange(2 ** n_qubits, dtype=np.int64)
    flip = 0
    phase = np.ones(k.shape, dtype=complex)
    for q, axis in string.axes:
        sign = 1.0 - 2.0 * ((k >> q) & 1)
        if axis == "X":
            flip |= 1 << q
        elif axis == "Y":
            flip |= 1 << q
            phase *= 1j * sign
        else:
            phase *= sign
    return flip, phase


def pauli_to_dense(model, include_shift=False, cap=DENSE_QUBIT_CAP):
    """
    Dense matrix sum_k a_k P_k with qubit 0 as the least significant index bit.

    Args:
        model: SpinModel or TotalModel (total terms already include the shift)
        include_shift: add C * identity for a SpinModel
        cap: largest allowed qubit count

    Returns:
        DenseHermitian
    """
    if isinstance(model, TotalModel):
        n, terms, constant = model.n_qubits, model.total_terms, 0.0
    else:
        n, terms = model.n_qubits, model.terms
        constant = model.shift if include_shift else 0.0
    if n > cap:
        raise DimensionError(f"{n} qubits exceeds the dense cap of {cap} (PROBE_DENSE_QUBIT_CAP)")

    dim = 2 ** n
    cols = np.arange(dim)
    matrix = np.zeros((dim, dim), dtype=complex)
    for term in terms:
        flip, phase = pauli_action(term.string, n)
        matrix[cols ^ flip, cols] += term.coefficient * phase
    if constant:
        matrix[cols, cols] += constant
    return DenseHermitian(n, matrix)


def sigma_probe(axis, n_qubits):
    """Dense X_0, Y_0 or Z_0 on an n-qubit register."""
    dim = 2 ** n_qubits
    cols = np.arange(dim)
    flip, phase = pauli_action(PauliString(((0, axis),)), n_qubits)
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[cols ^ flip, cols] = phase
    return matrix


def plus_state(n):
    """|+...+> on n qubits."""
    if n < 1:
        raise ValueError(f"plus_state needs n >= 1, got {n}")
    return StateVector(n, np.full(2 ** n, 2.0 ** (-n / 2), dtype=complex))


def basis_state(index, n):
    amps = np.zeros(2 ** n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


def _check_dims(H_T, psi0):
    if H_T.n_qubits != psi0.n_qubits:
        raise DimensionError(
            f"Hamiltonian acts on {H_T.n_qubits} qubits but the state has {psi0.n_qubits}"
        )


def _flip_probe(vectors):
    """Apply X_0 along axis 0 (flip bit 0 of the row index)."""
    rows = np.arange(vectors.shape[0]) ^ 1
    return vectors[rows]


def series_diagonal(total, times):
    """
    Fast path for Z-only total models with psi0 = |+...+>.

    A(t) = 2^-(N+1) sum_k cos(2 E_k t); degenerate energies are evaluated once.

    Args:
        total: TotalModel with Z-only terms
        times: sample times

    Returns:
        numpy.ndarray: real values A(t)
    """
    if not isinstance(total, TotalModel):
        raise TypeError("series_diagonal expects a TotalModel (see lift_total)")
    energies = diagonal_energies(total)
    levels, counts = np.unique(energies, return_counts=True)
    weights = counts / energies.size
    times = np.asarray(times, dtype=float)
    return np.cos(2.0 * np.outer(times, levels)) @ weights


def g_coefficients_diagonal(total):
    """g per distinct level of a Z-only total model with |+...+>: multiplicity / 2^(N+1)."""
    energies = diagonal_energies(total)
    return SpectralCoefficients(*_merge_levels(np.sort(energies), np.full(energies.size, 1.0 / energies.size)))


def _merge_levels(omegas, weights, tol=DEGENERACY_TOL):
    order = np.argsort(omegas, kind="stable")
    omegas, weights = omegas[order], weights[order]
    merged_w, merged_g = [], []
    start = 0
    for i in range(1, len(omegas) + 1):
        if i == len(omegas) or omegas[i] - omegas[start] > tol:
            merged_w.append(float(np.mean(omegas[start:i])))
            merged_g.append(complex(np.sum(weights[start:i])))
            start = i
    return np.array(merged_w), np.array(merged_g, dtype=complex)


def _raw_coefficients(H_T, psi0):
    energies, vectors = linalg.eigh(H_T.entries)
    c = vectors.conj().T @ psi0.amplitudes
    m = vectors.conj().T @ _flip_probe(vectors)
    g = (c.conj() @ m) * c
    return energies, g


def g_coefficients(H_T, psi0, merge_tol=DEGENERACY_TOL):
    """
    Spectral weights g_j = sum_i c_i* <E_i|X_0|E_j> c_j with c_i = <E_i|psi0>.

    Levels closer than merge_tol are merged by summing their weights, which
    is invariant under the choice of eigenbasis inside a degenerate level.

    Args:
        H_T: DenseHermitian total Hamiltonian
        psi0: initial StateVector

    Returns:
        SpectralCoefficients
    """
    _check_dims(H_T, psi0)
    energies, g = _raw_coefficients(H_T, psi0)
    return SpectralCoefficients(*_merge_levels(energies, g, merge_tol))


def evolve_state(H, psi0, t):
    """exp(-i H t) psi0 without forming the propagator."""
    return expm_multiply(-1j * t * H.entries, psi0.amplitudes)


def _propagated_series(H_T, psi0, times):
    A = -1j * H_T.entries
    steps = np.diff(times)
    if len(times) > 2 and steps[0] > 0 and np.allclose(steps, steps[0], rtol=0, atol=1e-12 * steps[0]):
        # interval mode sizes its Taylor steps by the span, so start from t_0 separately
        first = expm_multiply(times[0] * A, psi0.amplitudes)
        states = expm_multiply(A, first, start=0.0, stop=times[-1] - times[0],
                               num=len(times), endpoint=True)
    else:
        states = np.array([expm_multiply(t * A, psi0.amplitudes) for t in times])
    norms = np.einsum("ij,ij->i", states.conj(), states).real
    if np.max(np.abs(norms - 1.0), initial=0.0) > NORM_TOL:
        raise CrossCheckError("propagated state lost normalization")
    return np.einsum("ij,ij->i", states.conj(), _flip_probe(states.T).T)


def series_dense(H_T, psi0, times, cross_check=True):
    """
    <X_0(t)> for any Hermitian H_T and initial state.

    Route (i): <psi0|X_0 exp(-2iH_T t)|psi0> from the eigendecomposition.
    Route (ii): <psi(t)|X_0|psi(t)> with psi(t) = exp(-iH_T t) psi0.

    Args:
        H_T: DenseHermitian
        psi0: StateVector
        times: sample times
        cross_check: evaluate route (ii) and require agreement

    Returns:
        numpy.ndarray: real values A(t)

    Raises:
        CrossCheckError: routes disagree or the value is not real
    """
    _check_dims(H_T, psi0)
    times = np.asarray(times, dtype=float)
    energies, g = _raw_coefficients(H_T, psi0)
    values = np.exp(-2j * np.outer(times, energies)) @ g

    if cross_check and len(times):
        propagated = _propagated_series(H_T, psi0, times)
        deviation = np.max(np.abs(values - propagated))
        if deviation > CROSS_CHECK_TOL:
            raise CrossCheckError(f"eigen and propagation routes differ by {deviation:.3e}")

    if len(times) and np.max(np.abs(values.imag)) > CROSS_CHECK_TOL:
        raise CrossCheckError(f"<X_0(t)> has imaginary part {np.max(np.abs(values.imag)):.3e}")
    return values.real
