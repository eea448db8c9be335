"""Tests for brute-force spectra and the recovered-vs-oracle comparison."""

import math

import numpy as np
import pytest

from lib.model import SpinModel
from lib.oracle import LevelSet, brute_energies, compare


class TestBruteEnergies:
    def test_chain(self, spin_chain):
        levels = brute_energies(spin_chain)
        assert levels.energies == (-3.0, -1.0, 1.0, 5.0)
        assert levels.multiplicities == (1, 4, 2, 1)
        assert levels.as_dict() == {-3.0: 1, -1.0: 4, 1.0: 2, 5.0: 1}

    def test_shift_is_excluded(self, spin_chain, spin_chain_c6):
        assert brute_energies(spin_chain) == brute_energies(spin_chain_c6)

    def test_transverse_pair(self, transverse_pair):
        levels = brute_energies(transverse_pair)
        np.testing.assert_allclose(levels.energies, [-math.sqrt(2), -1.0, 1.0, math.sqrt(2)], atol=1e-12)
        assert levels.multiplicities == (1, 1, 1, 1)

    def test_empty_model(self):
        levels = brute_energies(SpinModel(2))
        assert levels == LevelSet((0.0,), (4,))
        assert len(levels) == 1


class TestCompare:
    def test_exact_match(self):
        report = compare([-1.0, 1.0], [-1.0, 1.0], 0.05)
        assert report.ok
        assert report.missed == []
        assert report.spurious == []
        assert [(o, r) for o, r, _ in report.matched] == [(-1.0, -1.0), (1.0, 1.0)]

    def test_missed_and_spurious(self):
        report = compare([-1.02, 3.0], [-1.0, 1.0], 0.05)
        assert not report.ok
        assert report.missed == [1.0]
        assert report.spurious == [3.0]
        assert report.matched[0][2] == pytest.approx(0.02)

    def test_each_level_used_once(self):
        report = compare([0.99, 1.02], [1.0], 0.05)
        assert [r for _, r, _ in report.matched] == [0.99]
        assert report.spurious == [1.02]

    def test_greedy_prefers_closest_pair(self):
        # 1.04 is within tolerance of both, but 1.09 can only pair with 1.1
        report = compare([1.04, 1.09], [1.0, 1.1], 0.05)
        assert report.ok
        assert sorted((o, r) for o, r, _ in report.matched) == [(1.0, 1.04), (1.1, 1.09)]

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValueError):
            compare([1.0], [1.0], 0.0)

    def test_to_dict(self):
        data = compare([2.0], [2.01], 0.05).to_dict()
        assert data["ok"] is True
        assert data["matched"][0]["oracle"] == 2.01
        assert data["matched"][0]["delta"] == pytest.approx(0.01)
        assert data["tolerance"] == 0.05
