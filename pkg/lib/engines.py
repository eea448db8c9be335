"""
Probe Spectroscopy - Engines
Interchangeable evaluators of the probe expectation <X_0(t)>
"""

import numpy as np

from lib.circuit import compile_protocol, expectation_z0, run_statevector, sample_shots
from lib.config import DEFAULT_SEED, DEFAULT_SHOTS
from lib.exact import plus_state, pauli_to_dense, series_dense, series_diagonal
from lib.model import UnsupportedModelError

ENGINES = ("exact", "dense", "circuit", "shots")


def _zigzag(n):
    """Grid index n -> non-negative seed key; independent of the grid size."""
    return 2 * n if n >= 0 else -2 * n - 1


class Engine:
    """
    Evaluates the probe expectation for one total model on batches of times.
    """

    name = "base"
    needs_diagonal = False

    def __init__(self, total):
        """
        Initialize an engine for a total model.

        Args:
            total: TotalModel H_T = Z_0 (H + C)
        """
        if self.needs_diagonal and not total.is_diagonal:
            raise UnsupportedModelError(
                f"engine '{self.name}' supports Z-only models; use --engine dense for X/Y terms"
            )
        self.total = total

    @property
    def even(self):
        """A(-t) = A(t) holds, so only n >= 0 needs evaluating."""
        return True

    def evaluate(self, times, indices):
        """
        Evaluate a batch of samples.

        Args:
            times: sample times t_n
            indices: grid indices n of those samples

        Returns:
            tuple: (values, stderr or None)
        """
        raise NotImplementedError


class DiagonalEngine(Engine):
    name = "exact"
    needs_diagonal = True

    def evaluate(self, times, indices):
        return series_diagonal(self.total, times), None


class DenseEngine(Engine):
    name = "dense"

    def __init__(self, total, psi0=None, cross_check=True):
        super().__init__(total)
        self.hamiltonian = pauli_to_dense(total)
        self.psi0 = psi0 if psi0 is not None else plus_state(total.n_qubits)
        self.custom_state = psi0 is not None
        self.cross_check = cross_check

    @property
    def even(self):
        return not self.custom_state

    def evaluate(self, times, indices):
        return series_dense(self.hamiltonian, self.psi0, times, cross_check=self.cross_check), None


class CircuitEngine(Engine):
    name = "circuit"
    needs_diagonal = True

    def evaluate(self, times, indices):
        values = [expectation_z0(run_statevector(compile_protocol(self.total, t))) for t in times]
        return np.array(values), None


class ShotEngine(Engine):
    name = "shots"
    needs_diagonal = True

    def __init__(self, total, shots=DEFAULT_SHOTS, seed=DEFAULT_SEED):
        super().__init__(total)
        if shots < 1:
            raise ValueError(f"shots must be >= 1, got {shots}")
        self.shots = shots
        self.seed = seed

    def sample_seed(self, n):
        return np.random.SeedSequence([self.seed, _zigzag(int(n))])

    def evaluate(self, times, indices):
        values, stderr = [], []
        for t, n in zip(times, indices):
            state = run_statevector(compile_protocol(self.total, t))
            result = sample_shots(state, self.shots, self.sample_seed(n))
            values.append(result.estimate)
            stderr.append(result.stderr)
        return np.array(values), np.array(stderr)


def make_engine(name, total, shots=DEFAULT_SHOTS, seed=DEFAULT_SEED, psi0=None, cross_check=True):
    """
    Build an engine by name.

    Args:
        name: one of ENGINES
        total: TotalModel
        shots, seed: shot emulation settings (engine 'shots')
        psi0, cross_check: dense engine settings

    Returns:
        Engine
    """
    if name == "exact":
        return DiagonalEngine(total)
    if name == "dense":
        return DenseEngine(total, psi0=psi0, cross_check=cross_check)
    if name == "circuit":
        return CircuitEngine(total)
    if name == "shots":
        return ShotEngine(total, shots=shots, seed=seed)
    raise ValueError(f"unknown engine {name!r} (expected one of {', '.join(ENGINES)})")
