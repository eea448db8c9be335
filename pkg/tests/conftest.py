"""Shared fixtures: bundled models and random model factories."""

from pathlib import Path

import numpy as np
import pytest

from lib.model import AXES, PauliString, SpinModel, Term, suggest_shift
from lib.model_loader import load_model

REPO_ROOT = Path(__file__).resolve().parent.parent
MODELS_DIR = REPO_ROOT / "models"


@pytest.fixture
def models_dir():
    return MODELS_DIR


@pytest.fixture
def spin_in_field():
    return load_model(str(MODELS_DIR / "spin_in_field.json"))


@pytest.fixture
def spin_chain():
    return load_model(str(MODELS_DIR / "spin_chain.json"))


@pytest.fixture
def spin_chain_c6():
    return load_model(str(MODELS_DIR / "spin_chain_c6.json"))


@pytest.fixture
def transverse_pair():
    return load_model(str(MODELS_DIR / "transverse_pair.json"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_random_model(rng, n_qubits, n_terms, diagonal=True):
    """Random Pauli model with a positive-making shift."""
    terms = []
    for _ in range(n_terms):
        size = int(rng.integers(1, n_qubits + 1))
        qubits = sorted(rng.choice(n_qubits, size=size, replace=False).tolist())
        axes = ["Z"] * size if diagonal else [AXES[i] for i in rng.integers(0, 3, size=size)]
        terms.append(Term(float(rng.uniform(-1, 1)), PauliString(tuple(zip(qubits, axes)))))
    model = SpinModel(n_qubits, tuple(terms))
    return model.with_shift(suggest_shift(model))


@pytest.fixture
def random_model():
    return make_random_model


def count_svg_markers(svg_text, gid="peak-markers"):
    """Number of marker instances inside the group with the given id."""
    start = svg_text.find(f'<g id="{gid}">')
    if start < 0:
        return 0
    end = svg_text.find("</g>", start)
    return svg_text[start:end].count("<use ")


@pytest.fixture
def svg_markers():
    return count_svg_markers
