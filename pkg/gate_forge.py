# gate_forge.py
"""
Constructors for every unitary the simulated algorithms use.

Gates are explicit dense matrices. Fixed gates (Hadamard powers, QFT, diffusion,
identities) are memoised in the gate cache; oracles are built per truth table.
Registers follow the basis convention of quantum_state: the input register is
the high-order part of the basis index, the output (ancilla) register the
low-order part.
"""
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping, Tuple

import numpy as np

from errors import ArityError, DimensionError, QubitCeilingError, ValidationError
from gate_cache import get_cache
from logger import get_logger
from quantum_state import bit_label
from sim_config import get_config
from tensor_linalg import as_matrix, check_unitary, identity, tensor_all, tensor_product

logger = get_logger('gates')

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
NOT_GATE = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def _check_qubits(k: int, what: str) -> None:
    ceiling = get_config().max_qubits
    if k < 1:
        raise ValidationError(f"{what} needs at least one qubit, got {k}")
    if k > ceiling:
        raise QubitCeilingError(f"{what} on {k} qubits exceeds the ceiling of {ceiling}")


def _check_bits(bits: str, width: int, what: str) -> None:
    if len(bits) != width or any(c not in '01' for c in bits):
        raise ValidationError(f"{what} '{bits}' is not a {width}-bit string")


@dataclass(frozen=True)
class TruthTable:
    """A function f: {0,1}^n_in -> {0,1}^n_out given row by row."""
    n_in: int
    n_out: int
    rows: Mapping[str, str]

    def __post_init__(self):
        if self.n_in < 1 or self.n_out < 1:
            raise ArityError(f"Truth table arity ({self.n_in}, {self.n_out}) must be positive")
        rows = dict(self.rows)
        for x, y in rows.items():
            _check_bits(x, self.n_in, "Truth table input")
            _check_bits(y, self.n_out, "Truth table output")
        missing = [bit_label(i, self.n_in) for i in range(2 ** self.n_in) if bit_label(i, self.n_in) not in rows]
        if missing:
            raise ValidationError(f"Truth table is missing inputs: {', '.join(missing)}")
        ordered = {x: rows[x] for x in sorted(rows)}
        object.__setattr__(self, 'rows', MappingProxyType(ordered))

    @classmethod
    def from_function(cls, n_in: int, n_out: int, fn: Callable[[int], int]) -> 'TruthTable':
        """Tabulate an integer-valued function of the integer input."""
        rows = {}
        for x in range(2 ** n_in):
            y = fn(x)
            if not 0 <= y < 2 ** n_out:
                raise ValidationError(f"f({x}) = {y} does not fit in {n_out} bits")
            rows[bit_label(x, n_in)] = bit_label(y, n_out)
        return cls(n_in, n_out, rows)

    @classmethod
    def constant(cls, n: int, value: int = 0) -> 'TruthTable':
        return cls.from_function(n, 1, lambda x: value)

    @classmethod
    def indicator(cls, n: int, marked: str) -> 'TruthTable':
        """f(x) = 1 iff x is the marked item."""
        _check_bits(marked, n, "Marked item")
        target = int(marked, 2)
        return cls.from_function(n, 1, lambda x: int(x == target))

    @classmethod
    def periodic(cls, n: int, r: int) -> 'TruthTable':
        """f(x) = x mod r on n output bits; injective within each period."""
        if not 1 <= r <= 2 ** n:
            raise ValidationError(f"Period {r} out of range for {n} bits")
        return cls.from_function(n, n, lambda x: x % r)

    @classmethod
    def inner_product(cls, n: int, k: str, negate: bool = False) -> 'TruthTable':
        """Linear function f(x) = k·x mod 2, optionally negated."""
        _check_bits(k, n, "Linear coefficient")
        mask = int(k, 2)
        return cls.from_function(n, 1, lambda x: (bin(x & mask).count('1') + int(negate)) % 2)

    def __call__(self, x: str) -> str:
        return self.rows[x]

    def value(self, x: int) -> int:
        return int(self.rows[bit_label(x, self.n_in)], 2)

    def values(self) -> np.ndarray:
        return np.array([self.value(x) for x in range(2 ** self.n_in)], dtype=np.int64)

    def is_constant(self) -> bool:
        return len(set(self.rows.values())) == 1

    def is_balanced(self) -> bool:
        if self.n_out != 1:
            return False
        ones = sum(1 for y in self.rows.values() if y == '1')
        return ones * 2 == 2 ** self.n_in

    def period(self) -> int:
        """Smallest shift r >= 1 with f(x) == f(x + r mod 2^n) for all x."""
        size = 2 ** self.n_in
        vals = self.values()
        for r in range(1, size + 1):
            if np.array_equal(vals, np.roll(vals, -r)):
                return r
        return size

    def format(self) -> str:
        """Render as oracle-file text, one `<input> <output>` row per line."""
        return ''.join(f"{x} {y}\n" for x, y in self.rows.items())


@dataclass(frozen=True, eq=False)
class GatePlan:
    """The superposition, entanglement and interference stages of a QAG."""
    superposition: np.ndarray
    entanglement: np.ndarray
    interference: np.ndarray

    def __post_init__(self):
        orders = set()
        for name in ('superposition', 'entanglement', 'interference'):
            mat = as_matrix(getattr(self, name))
            if not check_unitary(mat):
                raise ValidationError(f"GatePlan {name} stage is not unitary")
            orders.add(mat.shape[0])
        if len(orders) != 1:
            raise DimensionError(f"GatePlan stages have mismatched orders {sorted(orders)}")

    @property
    def order(self) -> int:
        return self.superposition.shape[0]


def identity_gate(k: int) -> np.ndarray:
    """Identity on k qubits."""
    _check_qubits(k, "Identity")
    return get_cache().get_or_build(('identity', k), lambda: identity(2 ** k))


def hadamard_power(k: int) -> np.ndarray:
    """The k-fold tensor power of H."""
    _check_qubits(k, "Hadamard power")
    return get_cache().get_or_build(('hadamard', k), lambda: tensor_all([HADAMARD] * k))


def qft(n: int) -> np.ndarray:
    """Quantum Fourier transform of order 2^n: entries 2^(-n/2) exp(2πi·jk/2^n), 0-based j, k."""
    _check_qubits(n, "QFT")

    def build():
        size = 2 ** n
        idx = np.arange(size)
        return np.exp(2j * np.pi * np.outer(idx, idx) / size) / math.sqrt(size)

    return get_cache().get_or_build(('qft', n), build)


def oracle_from_truth_table(f: TruthTable) -> np.ndarray:
    """Permutation matrix of |x>|y> -> |x>|y ⊕ f(x)>."""
    _check_qubits(f.n_in + f.n_out, "Oracle")
    size = 2 ** (f.n_in + f.n_out)
    out_size = 2 ** f.n_out

    gate = np.zeros((size, size), dtype=np.complex128)
    for x in range(2 ** f.n_in):
        fx = f.value(x)
        for y in range(out_size):
            gate[x * out_size + (y ^ fx), x * out_size + y] = 1.0
    return gate


def phase_oracle(n: int, marked: str) -> np.ndarray:
    """I − 2|x0><x0| on the source register."""
    _check_qubits(n, "Phase oracle")
    _check_bits(marked, n, "Marked item")
    diag = np.ones(2 ** n, dtype=np.complex128)
    diag[int(marked, 2)] = -1.0
    return np.diag(diag)


def diffusion(n: int) -> np.ndarray:
    """Inversion about the average on the source register, D = 2A − I with A = J/2^n."""
    _check_qubits(n, "Diffusion")

    def build():
        size = 2 ** n
        return np.full((size, size), 2.0 / size, dtype=np.complex128) - identity(size)

    return get_cache().get_or_build(('diffusion', n), build)


def compose_qag(plan: GatePlan) -> np.ndarray:
    """interference · entanglement · superposition."""
    return plan.interference @ plan.entanglement @ plan.superposition


def deutsch_jozsa_plan(f: TruthTable) -> GatePlan:
    """(H^n ⊗ I) · U_F · H^(n+1)."""
    if f.n_out != 1:
        raise ArityError(f"Deutsch-Jozsa needs a single-output function, got n_out={f.n_out}")
    n = f.n_in
    return GatePlan(
        superposition=hadamard_power(n + 1),
        entanglement=oracle_from_truth_table(f),
        interference=tensor_product(hadamard_power(n), identity_gate(1)),
    )


def shor_plan(f: TruthTable) -> GatePlan:
    """(QFT_n ⊗ I_n) · U_F · (QFT_n ⊗ I_n)."""
    if f.n_in != f.n_out:
        raise ArityError(f"Period finding needs n_in == n_out, got ({f.n_in}, {f.n_out})")
    n = f.n_in
    stage = tensor_product(qft(n), identity_gate(n))
    return GatePlan(superposition=stage, entanglement=oracle_from_truth_table(f), interference=stage)


def grover_iteration(n: int, marked: str) -> Tuple[np.ndarray, np.ndarray]:
    """The (U_F, D ⊗ I) pair applied once per search iteration."""
    oracle = oracle_from_truth_table(TruthTable.indicator(n, marked))
    return oracle, tensor_product(diffusion(n), identity_gate(1))


def grover_plan(n: int, marked: str) -> GatePlan:
    """(D ⊗ I) · U_F · H^(n+1), the single-iteration search gate."""
    oracle, interference = grover_iteration(n, marked)
    return GatePlan(superposition=hadamard_power(n + 1), entanglement=oracle, interference=interference)
