"""
Probe Spectroscopy - Spin Models
Weighted Pauli-string Hamiltonians, the probe-extended total Hamiltonian,
and the JSON model file format.

Conventions: hbar = 1, coefficients are angular frequencies, and qubit 0 of
every register is bit 0 (least significant) of a basis-state index.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

AXES = ("X", "Y", "Z")


class ModelFormatError(ValueError):
    """Invalid model document or model contents."""

    def __init__(self, message, line=None, field=None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


class UnsupportedModelError(ValueError):
    """Operation needs a diagonal (Z-only) model."""


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis; absent qubits carry identity."""

    axes: tuple = ()  # sorted ((qubit, axis), ...)

    def __post_init__(self):
        ops = tuple(sorted(self.axes))
        qubits = [q for q, _ in ops]
        if len(set(qubits)) != len(qubits):
            raise ModelFormatError(f"duplicate qubit in Pauli string {ops}")
        for q, axis in ops:
            if axis not in AXES:
                raise ModelFormatError(f"unknown axis {axis!r} (expected X, Y or Z)")
            if q < 0:
                raise ModelFormatError(f"negative qubit index {q}")
        object.__setattr__(self, "axes", ops)

    @classmethod
    def from_mapping(cls, mapping):
        return cls(tuple(mapping.items()))

    @classmethod
    def z(cls, *qubits):
        return cls(tuple((q, "Z") for q in qubits))

    @property
    def qubits(self):
        return tuple(q for q, _ in self.axes)

    @property
    def is_identity(self):
        return not self.axes

    @property
    def is_diagonal(self):
        return all(axis == "Z" for _, axis in self.axes)

    def shifted(self, offset):
        return PauliString(tuple((q + offset, axis) for q, axis in self.axes))

    def label(self):
        if not self.axes:
            return "I"
        return "".join(f"{axis}{q}" for q, axis in self.axes)


@dataclass(frozen=True)
class Term:
    coefficient: float
    string: PauliString

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise ModelFormatError(f"coefficient must be finite, got {self.coefficient}")
        object.__setattr__(self, "coefficient", float(self.coefficient))


@dataclass(frozen=True)
class SpinModel:
    """
    Hamiltonian H = sum_k a_k P_k on n_qubits plus an energy shift C >= 0.

    The shift is stored, never derived; see suggest_shift() for a helper.
    """

    n_qubits: int
    terms: tuple = ()
    shift: float = 0.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if isinstance(self.n_qubits, bool) or not isinstance(self.n_qubits, (int, np.integer)):
            raise ModelFormatError(f"qubit count must be an integer, got {self.n_qubits!r}", field="qubits")
        if self.n_qubits < 1:
            raise ModelFormatError(f"qubit count must be >= 1, got {self.n_qubits}", field="qubits")
        if not math.isfinite(self.shift) or self.shift < 0:
            raise ModelFormatError(f"shift must be a finite real >= 0, got {self.shift}", field="shift")
        terms = tuple(self.terms)
        for idx, term in enumerate(terms):
            for q in term.string.qubits:
                if q >= self.n_qubits:
                    raise ModelFormatError(
                        f"qubit index {q} out of range for a {self.n_qubits}-qubit model",
                        field=f"terms[{idx}].ops",
                    )
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "shift", float(self.shift))

    @property
    def is_diagonal(self):
        return all(term.string.is_diagonal for term in self.terms)

    def without_shift(self):
        return SpinModel(self.n_qubits, self.terms, 0.0, name=self.name)

    def with_shift(self, shift):
        return SpinModel(self.n_qubits, self.terms, shift, name=self.name)


@dataclass(frozen=True)
class TotalModel:
    """H_T = Z_0 (H + C) on N+1 qubits; qubit 0 is the probe."""

    inner: SpinModel
    total_terms: tuple

    @property
    def n_qubits(self):
        return self.inner.n_qubits + 1

    @property
    def is_diagonal(self):
        return self.inner.is_diagonal

    @property
    def shift(self):
        return self.inner.shift

    def as_spin_model(self):
        """View the total Hamiltonian as a plain (unshifted) model."""
        return SpinModel(self.n_qubits, self.total_terms, 0.0, name=self.inner.name)


def lift_total(model):
    """
    Build H_T = Z_0 (H + C).

    Every inner qubit index moves up by one. The shift becomes a single
    (C, Z_0) term and is omitted when C == 0.

    Args:
        model: SpinModel on qubits 0..N-1

    Returns:
        TotalModel: total model on N+1 qubits
    """
    probe = ((0, "Z"),)
    total = [
        Term(term.coefficient, PauliString(probe + term.string.shifted(1).axes))
        for term in model.terms
    ]
    if model.shift != 0:
        total.append(Term(model.shift, PauliString(probe)))
    return TotalModel(model, tuple(total))


def _as_spin_model(model):
    return model.as_spin_model() if isinstance(model, TotalModel) else model


def z_signs(qubits, n_qubits):
    """Eigenvalue of a Z-string on every basis state k: prod_i (1 - 2*bit_i(k))."""
    k = np.arange(2 ** n_qubits, dtype=np.int64)
    parity = np.zeros_like(k)
    for q in qubits:
        parity ^= (k >> q) & 1
    return 1.0 - 2.0 * parity


def diagonal_energies(model, include_shift=False):
    """
    Energies of a Z-only model on all 2^n computational basis states.

    Args:
        model: SpinModel or TotalModel (the latter viewed as a plain model)
        include_shift: add C to every entry

    Returns:
        numpy.ndarray: 2^n energies, entry k for basis state k
    """
    model = _as_spin_model(model)
    if not model.is_diagonal:
        raise UnsupportedModelError(
            "diagonal_energies needs a Z-only model; "
            "use the dense engine for models with X or Y terms"
        )
    energies = np.zeros(2 ** model.n_qubits)
    for term in model.terms:
        energies += term.coefficient * z_signs(term.string.qubits, model.n_qubits)
    if include_shift:
        energies += model.shift
    return energies


def spectral_bound(model):
    """Upper bound sum|a| + C on the largest |eigenvalue| of H_T."""
    if isinstance(model, TotalModel):
        return float(sum(abs(t.coefficient) for t in model.total_terms))
    return float(sum(abs(t.coefficient) for t in model.terms)) + model.shift


def suggest_shift(model, margin=1.0):
    """Shift that makes every level of H + C positive: sum|a| + margin."""
    return spectral_bound(model.without_shift()) + margin


def ising_from_couplings(couplings, fields=None, shift=0.0, double_counted=False, name=""):
    """
    Z-only Ising model from an explicit coupling matrix.

    Args:
        couplings: square matrix J; entries with i < j become J_ij Z_i Z_j
        fields: optional per-qubit longitudinal fields h_i Z_i
        shift: energy shift C
        double_counted: treat J as the symmetric matrix of 1/2 sum_{i,j} J_ij Z_i Z_j,
            so J_ij + J_ji is halved and each diagonal J_ii adds a constant J_ii/2

    Returns:
        SpinModel
    """
    J = np.asarray(couplings, dtype=float)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ModelFormatError(f"coupling matrix must be square, got shape {J.shape}")
    n = J.shape[0]
    terms = []
    if double_counted:
        constant = 0.5 * float(np.trace(J))
        if constant != 0:
            terms.append(Term(constant, PauliString()))
    for i in range(n):
        for j in range(i + 1, n):
            value = 0.5 * (J[i, j] + J[j, i]) if double_counted else J[i, j]
            if value != 0:
                terms.append(Term(float(value), PauliString.z(i, j)))
    if fields is not None:
        for i, h in enumerate(fields):
            if h != 0:
                terms.append(Term(float(h), PauliString.z(i)))
    return SpinModel(n, tuple(terms), shift, name=name)


def random_ising(rng, n_qubits, coupling=1.0, name=""):
    """
    All-to-all Ising model with couplings J_ij ~ U[-coupling, coupling].

    The shift is set to sum|J| + 1 so every level of H + C is positive.
    """
    J = np.triu(rng.uniform(-coupling, coupling, size=(n_qubits, n_qubits)), k=1)
    model = ising_from_couplings(J, name=name)
    return model.with_shift(suggest_shift(model))


def _require(condition, message, field):
    if not condition:
        raise ModelFormatError(message, field=field)


def _real(value, field):
    _require(not isinstance(value, bool), f"expected a real number, got {value!r}", field)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ModelFormatError(f"expected a real number, got {value!r}", field=field) from None


def _integer(value, field):
    _require(isinstance(value, int) and not isinstance(value, bool),
             f"expected an integer, got {value!r}", field)
    return value


def parse_model(document):
    """
    Parse a JSON model document.

    Format: {"qubits": int >= 1, "shift": real (default 0),
             "terms": [{"coeff": real, "ops": [{"qubit": int, "axis": "X"|"Y"|"Z"}]}]}
    Optional "name" and "description" keys are metadata.

    Args:
        document: JSON text

    Returns:
        SpinModel

    Raises:
        ModelFormatError: with line (syntax errors) or field path (content errors)
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"syntax error: {e.msg} (column {e.colno})", line=e.lineno) from None

    _require(isinstance(data, dict), "model document must be a JSON object", "<root>")
    _require("qubits" in data, "missing required key", "qubits")
    n_qubits = _integer(data["qubits"], "qubits")
    _require(n_qubits >= 1, f"qubit count must be >= 1, got {n_qubits}", "qubits")
    shift = _real(data.get("shift", 0.0), "shift")

    raw_terms = data.get("terms", [])
    _require(isinstance(raw_terms, list), "terms must be a list", "terms")

    terms = []
    for t_idx, raw in enumerate(raw_terms):
        where = f"terms[{t_idx}]"
        _require(isinstance(raw, dict), "term must be an object", where)
        _require("coeff" in raw, "missing required key", f"{where}.coeff")
        coeff = _real(raw["coeff"], f"{where}.coeff")
        _require(math.isfinite(coeff), f"coefficient must be finite, got {coeff}", f"{where}.coeff")
        ops = raw.get("ops", [])
        _require(isinstance(ops, list), "ops must be a list", f"{where}.ops")

        axes = {}
        for o_idx, op in enumerate(ops):
            op_where = f"{where}.ops[{o_idx}]"
            _require(isinstance(op, dict), "op must be an object", op_where)
            qubit = _integer(op.get("qubit"), f"{op_where}.qubit")
            axis = op.get("axis")
            _require(isinstance(axis, str) and axis.upper() in AXES,
                     f"axis must be one of X, Y, Z, got {axis!r}", f"{op_where}.axis")
            _require(qubit not in axes, f"duplicate qubit {qubit} in one Pauli string", f"{op_where}.qubit")
            _require(0 <= qubit < n_qubits,
                     f"qubit index {qubit} out of range for a {n_qubits}-qubit model", f"{op_where}.qubit")
            axes[qubit] = axis.upper()
        terms.append(Term(coeff, PauliString.from_mapping(axes)))

    return SpinModel(n_qubits, tuple(terms), shift, name=str(data.get("name", "")))


def model_to_dict(model):
    data = {}
    if model.name:
        data["name"] = model.name
    data["qubits"] = model.n_qubits
    data["shift"] = model.shift
    data["terms"] = [
        {
            "coeff": term.coefficient,
            "ops": [{"qubit": q, "axis": axis} for q, axis in term.string.axes],
        }
        for term in model.terms
    ]
    return data


def serialize_model(model):
    """JSON text accepted by parse_model (floats use lossless repr)."""
    return json.dumps(model_to_dict(model), indent=2) + "\n"
