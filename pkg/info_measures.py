# info_measures.py
"""
Information functionals over simulated states.

Shannon, von Neumann, intelligence, noise and Holevo quantities are in bits.
Renyi, Tsallis and relative entropy default to nats and take an optional base.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import entr, rel_entr

from errors import ArityError, DimensionError, InvariantViolation, NotHermitianError, ValidationError
from gate_forge import TruthTable
from logger import get_logger
from quantum_state import (DensityMatrix, ProbabilityDistribution, QubitSubset, StateVector,
                           branch_decompose, born_distribution, reduce)
from sim_config import get_config
from tensor_linalg import as_matrix, clip_eigenvalues, hermitian_eig, is_hermitian

logger = get_logger('measures')

LN2 = math.log(2.0)

# Slack allowed on the relations every record must satisfy
INVARIANT_TOL = 1e-9


def _floored(p: np.ndarray) -> np.ndarray:
    floor = get_config().prob_floor
    p = np.asarray(p, dtype=np.float64)
    return np.where(p > floor, p, 0.0)


def _entropy_bits(weights: np.ndarray) -> float:
    return float(np.sum(entr(_floored(weights))) / LN2)


@dataclass(frozen=True, eq=False)
class EntropyRecord:
    """Entropy bookkeeping for one state restricted to one qubit subset."""
    subset: QubitSubset
    shannon_bits: float
    von_neumann_bits: float
    intelligence: float
    noise_bits: float
    alpha: Optional[float] = None

    def __post_init__(self):
        gap = self.shannon_bits - self.von_neumann_bits
        if gap < -INVARIANT_TOL:
            raise InvariantViolation(
                f"Shannon {self.shannon_bits!r} below von Neumann {self.von_neumann_bits!r} on {self.subset.indices}"
            )
        if abs(self.intelligence - (1.0 - gap / len(self.subset))) > INVARIANT_TOL:
            raise InvariantViolation(f"Intelligence {self.intelligence!r} inconsistent with entropy gap {gap!r}")
        if abs(self.noise_bits - gap) > INVARIANT_TOL:
            raise InvariantViolation(f"Noise {self.noise_bits!r} inconsistent with entropy gap {gap!r}")
        if self.alpha is not None and not -1.0 - INVARIANT_TOL <= self.alpha <= 1.0 + INVARIANT_TOL:
            raise InvariantViolation(f"Alpha coefficient {self.alpha!r} outside [-1, 1]")


def shannon_subset(s: StateVector, t: QubitSubset) -> float:
    """Shannon entropy of the computational-basis measurement on t, in bits."""
    return _entropy_bits(born_distribution(s, t).probabilities)


def von_neumann(rho: DensityMatrix) -> float:
    """−Tr ρ log₂ ρ over the clipped spectrum."""
    values = clip_eigenvalues(hermitian_eig(rho.matrix).eigenvalues)
    return _entropy_bits(values)


def entropy_record(s: StateVector, t: QubitSubset, alpha: Optional[float] = None) -> EntropyRecord:
    shannon = shannon_subset(s, t)
    vn = von_neumann(reduce(s, t))
    gap = shannon - vn
    record = EntropyRecord(
        subset=t,
        shannon_bits=shannon,
        von_neumann_bits=vn,
        intelligence=min(1.0, max(0.0, 1.0 - gap / len(t))),
        noise_bits=max(gap, 0.0),
        alpha=alpha,
    )
    logger.debug(f"Entropy on {t.indices}: shannon={shannon:.12g} vn={vn:.12g} J={record.intelligence:.12g}")
    return record


def intelligence(s: StateVector, t: QubitSubset) -> float:
    """J_T = 1 − (S_Sh − S_vN)/|T|."""
    return entropy_record(s, t).intelligence


def mean_noise(s: StateVector, qubits: QubitSubset) -> float:
    """Average per-qubit Shannon minus von Neumann gap."""
    qubits.validate(s.n_qubits)
    gaps = [entropy_record(s, QubitSubset.of(j)).noise_bits for j in qubits]
    return float(np.mean(gaps))


def alpha_coefficient(f: TruthTable, j: int) -> float:
    """Mean of (−1)^(f(..0..) + f(..1..)) over the settings of the inputs other than j."""
    if f.n_out != 1:
        raise ArityError(f"Alpha coefficient needs a single-output function, got n_out={f.n_out}")
    if not 1 <= j <= f.n_in:
        raise ValidationError(f"Qubit {j} out of range for a {f.n_in}-input function")
    vals = np.moveaxis(f.values().reshape([2] * f.n_in), j - 1, 0).reshape(2, -1)
    return float(np.mean((-1.0) ** (vals[0] + vals[1])))


def binary_entropy(p: float) -> float:
    """h₂(p) in bits."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"Binary entropy argument {p!r} outside [0, 1]")
    return _entropy_bits(np.array([p, 1.0 - p]))


def shannon_full(p: ProbabilityDistribution, base: float = 2.0) -> float:
    """−Σ p log p in the given base."""
    if base <= 0 or base == 1:
        raise ValidationError(f"Invalid logarithm base {base!r}")
    return float(np.sum(entr(_floored(p.probabilities))) / math.log(base))


Measurable = Union[ProbabilityDistribution, DensityMatrix]


def _weights(p_or_rho: Measurable) -> np.ndarray:
    if isinstance(p_or_rho, DensityMatrix):
        values = clip_eigenvalues(hermitian_eig(p_or_rho.matrix).eigenvalues)
    elif isinstance(p_or_rho, ProbabilityDistribution):
        values = _floored(p_or_rho.probabilities)
    else:
        raise ValidationError(f"Expected a distribution or density matrix, got {type(p_or_rho).__name__}")
    return values[values > 0]


def _check_order(q: float) -> None:
    if not math.isfinite(q) or q <= 0 or q == 1:
        raise ValidationError(f"Entropy order q={q!r} must be positive and different from 1")


def renyi(p_or_rho: Measurable, q: float, base: Optional[float] = None) -> float:
    """ln(Σ wᵠ)/(1 − q) over probabilities or eigenvalues."""
    _check_order(q)
    w = _weights(p_or_rho)
    value = math.log(float(np.sum(w ** q))) / (1.0 - q)
    return value / math.log(base) if base else value


def tsallis(p_or_rho: Measurable, q: float) -> float:
    """(1 − Σ wᵠ)/(q − 1) over probabilities or eigenvalues."""
    _check_order(q)
    w = _weights(p_or_rho)
    return (1.0 - float(np.sum(w ** q))) / (q - 1.0)


def relative_entropy(p: Measurable, q: Measurable, base: Optional[float] = None) -> float:
    """Classical Σ p ln(p/q) or quantum Tr ρ(ln ρ − ln σ); math.inf when the support condition fails."""
    if isinstance(p, ProbabilityDistribution) and isinstance(q, ProbabilityDistribution):
        value = _classical_relative_entropy(p, q)
    elif isinstance(p, DensityMatrix) and isinstance(q, DensityMatrix):
        value = _quantum_relative_entropy(p, q)
    else:
        raise ValidationError("Relative entropy needs two distributions or two density matrices")

    if math.isinf(value):
        logger.warning("Relative entropy support condition violated; result is infinite")
        return math.inf
    value = max(value, 0.0)
    return value / math.log(base) if base else value


def _classical_relative_entropy(p: ProbabilityDistribution, q: ProbabilityDistribution) -> float:
    missing = set(p.labels) - set(q.labels)
    if missing:
        raise DimensionError(f"Reference distribution lacks outcomes {sorted(missing)}")
    q_map = q.as_dict()
    pv = _floored(p.probabilities)
    qv = _floored(np.array([q_map[label] for label in p.labels]))
    return float(np.sum(rel_entr(pv, qv)))


def _quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    if rho.matrix.shape != sigma.matrix.shape:
        raise DimensionError(f"Density matrices of shapes {rho.matrix.shape} and {sigma.matrix.shape}")
    clip = get_config().eig_clip

    spectrum = hermitian_eig(sigma.matrix)
    # Weight of ρ along each eigenvector of σ
    overlaps = np.real(np.einsum('ij,ik,kj->j', np.conj(spectrum.eigenvectors), rho.matrix, spectrum.eigenvectors))
    kernel = spectrum.eigenvalues <= clip
    if np.any(overlaps[kernel] > clip):
        return math.inf

    neg_entropy = -von_neumann(rho) * LN2
    cross = float(np.sum(overlaps[~kernel] * np.log(spectrum.eigenvalues[~kernel])))
    return neg_entropy - cross


def holevo_accessible(rho_list: Sequence[DensityMatrix],
                      priors: Union[ProbabilityDistribution, Sequence[float]]) -> float:
    """S(Σ pᵢρᵢ) − Σ pᵢ S(ρᵢ) in bits."""
    weights = priors.probabilities if isinstance(priors, ProbabilityDistribution) else np.asarray(priors, dtype=float)
    if len(rho_list) != len(weights):
        raise DimensionError(f"{len(rho_list)} states but {len(weights)} prior weights")
    average = DensityMatrix.mixture(list(rho_list), list(weights))
    value = von_neumann(average) - sum(w * von_neumann(r) for w, r in zip(weights, rho_list))
    return max(float(value), 0.0)


@dataclass(frozen=True, eq=False)
class ObservablePair:
    """Two Hermitian observables and the pure state they are measured on."""
    a: np.ndarray
    b: np.ndarray
    state: StateVector

    def __post_init__(self):
        for name in ('a', 'b'):
            mat = as_matrix(getattr(self, name))
            if mat.shape != (self.state.dim, self.state.dim):
                raise DimensionError(f"Observable {name} has shape {mat.shape}, state has dimension {self.state.dim}")
            if not is_hermitian(mat):
                raise NotHermitianError(f"Observable {name} is not Hermitian")
            object.__setattr__(self, name, mat)


@dataclass(frozen=True)
class UncertaintyReport:
    var_a: float
    var_b: float
    commutator_term: float
    covariance: float
    is_intelligent: bool

    @property
    def lhs(self) -> float:
        return self.var_a * self.var_b

    @property
    def rhs(self) -> float:
        return self.commutator_term + self.covariance ** 2

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


def uncertainty_check(obs: ObservablePair, tol: Optional[float] = None) -> UncertaintyReport:
    """Evaluate both sides of the Schrödinger–Robertson relation on obs.state."""
    tol = get_config().intelligent_tol if tol is None else tol
    psi = obs.state.amplitudes

    def expect(m: np.ndarray) -> complex:
        return complex(np.vdot(psi, m @ psi))

    mean_a = expect(obs.a).real
    mean_b = expect(obs.b).real
    var_a = max(expect(obs.a @ obs.a).real - mean_a ** 2, 0.0)
    var_b = max(expect(obs.b @ obs.b).real - mean_b ** 2, 0.0)
    commutator = expect(obs.a @ obs.b - obs.b @ obs.a)
    anticommutator = expect(obs.a @ obs.b + obs.b @ obs.a)

    report = UncertaintyReport(
        var_a=var_a,
        var_b=var_b,
        commutator_term=abs(commutator) ** 2 / 4.0,
        covariance=anticommutator.real / 2.0 - mean_a * mean_b,
        is_intelligent=False,
    )
    if report.slack < -INVARIANT_TOL:
        raise InvariantViolation(f"Uncertainty relation violated by {-report.slack!r}")

    is_intelligent = abs(report.slack) <= tol
    return UncertaintyReport(var_a, var_b, report.commutator_term, report.covariance, is_intelligent)


def select_intelligent_state(s: StateVector, t: QubitSubset, tie_tol: Optional[float] = None) -> str:
    """Most probable outcome on t; near-ties go to the lowest index."""
    tie_tol = get_config().tie_tol if tie_tol is None else tie_tol
    dist = born_distribution(s, t)
    best = float(np.max(dist.probabilities))
    index = int(np.flatnonzero(dist.probabilities >= best - tie_tol)[0])
    return dist.labels[index]


def branch_entropies(s: StateVector, pivot_qubit: int) -> Tuple[float, float]:
    """Partial Shannon sums of the pivot=0 and pivot=1 branches; they add up to the full-register entropy."""
    zero, one = branch_decompose(s, pivot_qubit)
    return (_entropy_bits(np.abs(zero.vector) ** 2), _entropy_bits(np.abs(one.vector) ** 2))


def mutual_information(s: StateVector, a: QubitSubset, b: QubitSubset) -> float:
    """S(a) + S(b) − S(ab), von Neumann, in bits."""
    joint = QubitSubset(a.indices + b.indices)
    return von_neumann(reduce(s, a)) + von_neumann(reduce(s, b)) - von_neumann(reduce(s, joint))


def conditional_entropy(s: StateVector, a: QubitSubset, b: QubitSubset) -> float:
    """S(ab) − S(b); negative for entangled a and b."""
    joint = QubitSubset(a.indices + b.indices)
    return von_neumann(reduce(s, joint)) - von_neumann(reduce(s, b))
