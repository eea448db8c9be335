"""
Probe Spectroscopy - Oracle
Brute-force spectra and grading of recovered energies
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from lib.config import DEGENERACY_TOL
from lib.exact import pauli_to_dense
from lib.model import diagonal_energies


@dataclass(frozen=True)
class LevelSet:
    """Distinct energies (ascending) with their multiplicities."""

    energies: tuple
    multiplicities: tuple

    def as_dict(self):
        return dict(zip(self.energies, self.multiplicities))

    def __len__(self):
        return len(self.energies)


def _distinct(values, tol):
    values = np.sort(np.asarray(values, dtype=float))
    energies, counts = [], []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[start] > tol:
            energies.append(float(np.mean(values[start:i])))
            counts.append(i - start)
            start = i
    return LevelSet(tuple(energies), tuple(counts))


def brute_energies(model, tol=DEGENERACY_TOL):
    """
    Spectrum of H (without the shift) by enumeration or dense diagonalization.

    Args:
        model: SpinModel
        tol: levels closer than this are merged

    Returns:
        LevelSet
    """
    if model.is_diagonal:
        return _distinct(diagonal_energies(model), tol)
    matrix = pauli_to_dense(model).entries
    return _distinct(linalg.eigvalsh(matrix), tol)


@dataclass
class ComparisonReport:
    matched: list
    missed: list
    spurious: list
    tolerance: float

    @property
    def ok(self):
        return not self.missed and not self.spurious

    def to_dict(self):
        return {
            "matched": [
                {"oracle": o, "recovered": r, "delta": d} for o, r, d in self.matched
            ],
            "missed": list(self.missed),
            "spurious": list(self.spurious),
            "tolerance": self.tolerance,
            "ok": self.ok,
        }


def compare(recovered, oracle, tol):
    """
    Greedy nearest matching by ascending |delta|.

    Each oracle level and each recovered level is used at most once; pairs
    farther apart than tol are never matched.

    Args:
        recovered: recovered energies
        oracle: reference energies
        tol: matching tolerance (> 0)

    Returns:
        ComparisonReport
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    recovered = [float(e) for e in recovered]
    oracle = [float(e) for e in oracle]

    candidates = sorted(
        (abs(r - o), i, j)
        for i, o in enumerate(oracle)
        for j, r in enumerate(recovered)
        if abs(r - o) <= tol
    )
    used_oracle, used_recovered = set(), set()
    matched = []
    for delta, i, j in candidates:
        if i in used_oracle or j in used_recovered:
            continue
        used_oracle.add(i)
        used_recovered.add(j)
        matched.append((oracle[i], recovered[j], delta))

    matched.sort()
    missed = [o for i, o in enumerate(oracle) if i not in used_oracle]
    spurious = [r for j, r in enumerate(recovered) if j not in used_recovered]
    return ComparisonReport(matched, missed, spurious, tol)
