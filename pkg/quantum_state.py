# quantum_state.py
"""
Pure-state semantics over an n-qubit computational basis.

Basis index b encodes |i1 ... in> with qubit 1 as the most significant bit, so
the left-to-right tensor notation |i1> ⊗ ... ⊗ |in> reads directly as the
binary expansion of b. Qubit positions in a QubitSubset are 1-based.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import DimensionError, NormalizationError, ValidationError
from logger import get_logger
from sim_config import get_config
from tensor_linalg import apply, as_matrix, as_vector, check_density

logger = get_logger('state')


def bit_label(index: int, width: int) -> str:
    return format(index, f'0{width}b') if width > 0 else ''


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class QubitSubset:
    """Ordered set of 1-based qubit positions."""
    indices: Tuple[int, ...]

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        if len(set(indices)) != len(indices):
            raise ValidationError(f"Qubit subset has repeated positions: {indices}")
        if any(i < 1 for i in indices):
            raise ValidationError(f"Qubit positions are 1-based, got {indices}")
        object.__setattr__(self, 'indices', indices)

    @classmethod
    def of(cls, *indices: int) -> 'QubitSubset':
        return cls(tuple(indices))

    @classmethod
    def first(cls, k: int) -> 'QubitSubset':
        """The first k qubits, {1, ..., k}."""
        return cls(tuple(range(1, k + 1)))

    @classmethod
    def parse(cls, text: str) -> 'QubitSubset':
        """Parse a comma-separated list such as "1,2,3"."""
        try:
            return cls(tuple(int(part) for part in text.split(',') if part.strip()))
        except ValueError as e:
            raise ValidationError(f"Bad qubit subset '{text}': {e}") from e

    def validate(self, n_qubits: int) -> None:
        if not self.indices:
            raise ValidationError("Qubit subset is empty")
        bad = [i for i in self.indices if i > n_qubits]
        if bad:
            raise ValidationError(f"Qubit positions {bad} out of range for {n_qubits} qubits")

    def zero_based(self) -> List[int]:
        return [i - 1 for i in self.indices]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitude vector of dimension 2^n_qubits."""
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = as_vector(self.amplitudes)
        if amps.shape[0] != 2 ** self.n_qubits:
            raise DimensionError(
                f"State of {self.n_qubits} qubits needs {2 ** self.n_qubits} amplitudes, got {amps.shape[0]}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > get_config().norm_tol:
            raise NormalizationError(f"State has squared norm {norm!r}, expected 1")
        object.__setattr__(self, 'amplitudes', _frozen(amps))

    @classmethod
    def from_amplitudes(cls, amplitudes) -> 'StateVector':
        amps = as_vector(amplitudes)
        n = int(round(np.log2(amps.shape[0])))
        if 2 ** n != amps.shape[0]:
            raise DimensionError(f"Amplitude count {amps.shape[0]} is not a power of two")
        return cls(n, amps)

    @classmethod
    def normalize(cls, amplitudes) -> 'StateVector':
        """Build a state from unnormalized amplitudes (test fixtures only)."""
        amps = as_vector(amplitudes)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise NormalizationError("Cannot normalize the zero vector")
        return cls.from_amplitudes(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def evolve(self, u) -> 'StateVector':
        """Apply a unitary and return the new state."""
        return StateVector(self.n_qubits, apply(u, self.amplitudes))

    def tensor(self, other: 'StateVector') -> 'StateVector':
        return StateVector(self.n_qubits + other.n_qubits, np.kron(self.amplitudes, other.amplitudes))

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, np.conj(self.amplitudes))

    def label(self, index: int) -> str:
        return bit_label(index, self.n_qubits)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix of order 2^n_qubits."""
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = as_matrix(self.matrix)
        if mat.shape != (2 ** self.n_qubits, 2 ** self.n_qubits):
            raise DimensionError(f"Density matrix of {self.n_qubits} qubits cannot have shape {mat.shape}")
        if not check_density(mat):
            raise ValidationError("Matrix is not a valid density matrix")
        object.__setattr__(self, 'matrix', _frozen(mat))

    @classmethod
    def from_matrix(cls, matrix) -> 'DensityMatrix':
        mat = as_matrix(matrix)
        n = int(round(np.log2(mat.shape[0])))
        if 2 ** n != mat.shape[0]:
            raise DimensionError(f"Matrix order {mat.shape[0]} is not a power of two")
        return cls(n, mat)

    @classmethod
    def from_state(cls, state: StateVector) -> 'DensityMatrix':
        return cls(state.n_qubits, state.projector())

    @classmethod
    def mixture(cls, members: Sequence['DensityMatrix'], weights: Sequence[float]) -> 'DensityMatrix':
        """Convex combination Σ w_i ρ_i."""
        if len(members) != len(weights) or not members:
            raise DimensionError("Mixture needs one weight per member")
        n = members[0].n_qubits
        if any(m.n_qubits != n for m in members):
            raise DimensionError("Mixture members must share a dimension")
        total = sum(w * m.matrix for w, m in zip(weights, members))
        return cls(n, total)

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix))


@dataclass(frozen=True, eq=False)
class ProbabilityDistribution:
    """Probabilities over bit-string outcome labels."""
    labels: Tuple[str, ...]
    probabilities: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=np.float64)
        labels = tuple(self.labels)
        if probs.ndim != 1 or probs.shape[0] != len(labels):
            raise DimensionError("Distribution needs exactly one probability per label")
        tol = get_config().norm_tol
        if np.any(probs < -tol):
            raise ValidationError("Distribution has negative probabilities")
        if abs(float(np.sum(probs)) - 1.0) > tol:
            raise NormalizationError(f"Distribution sums to {float(np.sum(probs))!r}, expected 1")
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'probabilities', _frozen(np.clip(probs, 0.0, None)))

    @classmethod
    def from_mapping(cls, mapping: Dict[str, float]) -> 'ProbabilityDistribution':
        labels = tuple(mapping.keys())
        return cls(labels, np.array([float(mapping[k]) for k in labels]))

    @classmethod
    def uniform(cls, width: int) -> 'ProbabilityDistribution':
        count = 2 ** width
        return cls(tuple(bit_label(i, width) for i in range(count)), np.full(count, 1.0 / count))

    def p(self, label: str) -> float:
        try:
            return float(self.probabilities[self.labels.index(label)])
        except ValueError:
            raise ValidationError(f"Unknown outcome label '{label}'")

    def as_dict(self) -> Dict[str, float]:
        return {label: float(p) for label, p in zip(self.labels, self.probabilities)}

    def support(self, floor: Optional[float] = None) -> List[str]:
        floor = get_config().prob_floor if floor is None else floor
        return [label for label, p in zip(self.labels, self.probabilities) if p > floor]


@dataclass(frozen=True, eq=False)
class Branch:
    """Unnormalized component of a state for one value of the pivot qubit."""
    pivot_value: int
    vector: np.ndarray
    weight: float


def basis_state(n: int, bits: str) -> StateVector:
    """Computational basis state |bits>."""
    if n < 1 or len(bits) != n or any(c not in '01' for c in bits):
        raise ValidationError(f"Bad bit-string '{bits}' for {n} qubits")
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return StateVector(n, amps)


def uniform_state(n: int) -> StateVector:
    return StateVector(n, np.full(2 ** n, 2 ** (-n / 2), dtype=np.complex128))


def _as_tensor(s: StateVector) -> np.ndarray:
    return s.amplitudes.reshape([2] * s.n_qubits)


def born_distribution(s: StateVector, t: QubitSubset) -> ProbabilityDistribution:
    """Marginal measurement distribution over the qubits in t, labelled in t's order."""
    t.validate(s.n_qubits)
    keep = t.zero_based()
    others = tuple(i for i in range(s.n_qubits) if i not in keep)

    probs = np.abs(_as_tensor(s)) ** 2
    marginal = probs.sum(axis=others) if others else probs
    # Remaining axes are in ascending qubit order; reorder to t's order
    ascending = sorted(keep)
    marginal = np.transpose(marginal, [ascending.index(q) for q in keep]).reshape(-1)

    width = len(keep)
    labels = tuple(bit_label(i, width) for i in range(2 ** width))
    return ProbabilityDistribution(labels, marginal / marginal.sum())


def reduce(s: StateVector, t: QubitSubset) -> DensityMatrix:
    """Partial trace of |s><s| over the complement of t."""
    t.validate(s.n_qubits)
    keep = t.zero_based()
    others = [i for i in range(s.n_qubits) if i not in keep]

    psi = np.transpose(_as_tensor(s), keep + others).reshape(2 ** len(keep), -1)
    rho = psi @ np.conj(psi).T
    return DensityMatrix(len(keep), rho)


def branch_decompose(s: StateVector, pivot_qubit: int) -> Tuple[Branch, Branch]:
    """Split s into its pivot=0 and pivot=1 components over the remaining qubits."""
    if not 1 <= pivot_qubit <= s.n_qubits:
        raise ValidationError(f"Pivot qubit {pivot_qubit} out of range for {s.n_qubits} qubits")
    psi = np.moveaxis(_as_tensor(s), pivot_qubit - 1, 0).reshape(2, -1)

    branches = []
    for value in (0, 1):
        vector = np.array(psi[value], copy=True)
        branches.append(Branch(value, vector, float(np.sum(np.abs(vector) ** 2))))
    return branches[0], branches[1]
