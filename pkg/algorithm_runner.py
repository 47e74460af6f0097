# algorithm_runner.py
"""
Step-by-step execution of the Deutsch, Deutsch-Jozsa, period-finding and
search algorithms.

Every recorded step carries per-qubit and subset entropy records plus the
measurement distribution of the analysis subset. Single-pass algorithms emit
one iteration holding all four steps. The search algorithm emits iteration 0
(input, superposition) followed by one iteration per oracle call.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce as fold
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import ArityError, IndeterminatePeriodError, InvariantViolation, ValidationError
from gate_forge import GatePlan, TruthTable, compose_qag, deutsch_jozsa_plan, grover_plan, shor_plan
from info_measures import (EntropyRecord, alpha_coefficient, entropy_record, holevo_accessible,
                           select_intelligent_state, shannon_full)
from logger import get_logger
from quantum_state import (DensityMatrix, ProbabilityDistribution, QubitSubset, StateVector, basis_state,
                           born_distribution, reduce)
from sim_config import get_config

logger = get_logger('runner')

ALGORITHMS = ('deutsch', 'deutsch-jozsa', 'shor', 'grover')
STEP_ORDER = ('input', 'superposition', 'entanglement', 'interference')
GRANULARITIES = ('iter', 'substep')

# Tolerance on exact outcome probabilities and the amplitude law
EXACT_TOL = 1e-9


@dataclass(frozen=True)
class AlgorithmConfig:
    """One algorithm invocation."""
    algorithm: str
    n: int
    oracle: Union[TruthTable, str]
    max_iterations: int = 1
    analysis_subset: Optional[QubitSubset] = None
    granularity: str = 'substep'
    scan: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"Unknown algorithm '{self.algorithm}', expected one of {', '.join(ALGORITHMS)}")
        if self.n < 1:
            raise ValidationError(f"Register size n={self.n} must be at least 1")
        if self.granularity not in GRANULARITIES:
            raise ValidationError(f"Unknown granularity '{self.granularity}'")
        if self.max_iterations < 1:
            raise ValidationError(f"max_iterations={self.max_iterations} must be at least 1")

        if self.algorithm == 'grover':
            object.__setattr__(self, 'oracle', _marked_from_oracle(self.oracle, self.n))
        elif not isinstance(self.oracle, TruthTable):
            raise ValidationError(f"{self.algorithm} needs a truth-table oracle")
        else:
            _check_arity(self.algorithm, self.oracle, self.n)

        if self.analysis_subset is not None:
            self.analysis_subset.validate(self.register_qubits)

    @property
    def register_qubits(self) -> int:
        """Total qubits simulated, ancillas included."""
        return 2 * self.n if self.algorithm == 'shor' else self.n + 1

    @property
    def subset(self) -> QubitSubset:
        return self.analysis_subset or QubitSubset.first(self.n)

    def to_dict(self) -> Dict[str, Any]:
        oracle = self.oracle if isinstance(self.oracle, str) else dict(self.oracle.rows)
        return {
            'algorithm': self.algorithm,
            'n': self.n,
            'oracle': oracle,
            'max_iterations': self.max_iterations,
            'subset': list(self.subset.indices),
            'granularity': self.granularity,
            'scan': self.scan,
        }


def _marked_from_oracle(oracle: Union[TruthTable, str], n: int) -> str:
    if isinstance(oracle, TruthTable):
        if oracle.n_in != n or oracle.n_out != 1:
            raise ArityError(f"Search oracle must map {n} bits to 1, got ({oracle.n_in}, {oracle.n_out})")
        marked = [x for x, y in oracle.rows.items() if y == '1']
        if len(marked) != 1:
            raise ValidationError(f"Search oracle must mark exactly one item, found {len(marked)}")
        return marked[0]
    if len(oracle) != n or any(c not in '01' for c in oracle):
        raise ValidationError(f"Marked item '{oracle}' is not a {n}-bit string")
    return oracle


def _check_arity(algorithm: str, f: TruthTable, n: int) -> None:
    if algorithm == 'deutsch' and n != 1:
        raise ArityError(f"deutsch runs on a single input bit, got n={n}")
    expected = {
        'deutsch': (1, 1),
        'deutsch-jozsa': (n, 1),
        'shor': (n, n),
    }[algorithm]
    if (f.n_in, f.n_out) != expected:
        raise ArityError(f"{algorithm} with n={n} needs a {expected} truth table, got ({f.n_in}, {f.n_out})")


@dataclass(frozen=True, eq=False)
class StepRecord:
    label: str
    state: StateVector
    per_qubit: Tuple[EntropyRecord, ...]
    subset: EntropyRecord
    distribution: ProbabilityDistribution


@dataclass(frozen=True, eq=False)
class StepTrace:
    """The steps recorded during one iteration, in algorithm order."""
    iteration_index: int
    steps: Tuple[StepRecord, ...]

    def __post_init__(self):
        positions = [STEP_ORDER.index(step.label) for step in self.steps]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise InvariantViolation(
                f"Iteration {self.iteration_index} steps out of order: {[s.label for s in self.steps]}"
            )


@dataclass(frozen=True, eq=False)
class RunResult:
    algorithm: str
    traces: Tuple[StepTrace, ...]
    chosen_outcome: str
    stop_iteration: int
    verdict: str
    details: Dict[str, Any] = field(default_factory=dict)

    def steps(self) -> Iterator[Tuple[int, StepRecord]]:
        for trace in self.traces:
            for step in trace.steps:
                yield trace.iteration_index, step

    @property
    def final_state(self) -> StateVector:
        return self.traces[-1].steps[-1].state


def _record(label: str, state: StateVector, subset: QubitSubset,
            alphas: Optional[Dict[int, float]] = None) -> StepRecord:
    alphas = alphas or {}
    per_qubit = tuple(
        entropy_record(state, QubitSubset.of(j), alpha=alphas.get(j))
        for j in range(1, state.n_qubits + 1)
    )
    record = StepRecord(
        label=label,
        state=state,
        per_qubit=per_qubit,
        subset=entropy_record(state, subset),
        distribution=born_distribution(state, subset),
    )
    logger.debug(
        f"{label}: shannon={record.subset.shannon_bits:.12g} vn={record.subset.von_neumann_bits:.12g} "
        f"J={record.subset.intelligence:.12g}"
    )
    return record


def _run_single_pass(plan: GatePlan, start: StateVector, subset: QubitSubset,
                     alphas: Optional[Dict[int, float]] = None) -> StepTrace:
    state = start
    steps = [_record('input', state, subset)]
    for label, gate in (('superposition', plan.superposition),
                        ('entanglement', plan.entanglement),
                        ('interference', plan.interference)):
        state = state.evolve(gate)
        steps.append(_record(label, state, subset, alphas if label == 'entanglement' else None))
    return StepTrace(iteration_index=1, steps=tuple(steps))


def _dj_trace(f: TruthTable, subset: QubitSubset) -> StepTrace:
    n = f.n_in
    subset.validate(n + 1)
    alphas = {j: alpha_coefficient(f, j) for j in range(1, n + 1)}
    return _run_single_pass(deutsch_jozsa_plan(f), basis_state(n + 1, '0' * n + '1'), subset, alphas)


def run_deutsch(f: TruthTable) -> RunResult:
    """Deutsch's algorithm; the first qubit ends in |0> for constant f and |1> for balanced f."""
    if (f.n_in, f.n_out) != (1, 1):
        raise ArityError(f"Deutsch needs a 1-bit function, got ({f.n_in}, {f.n_out})")
    trace = _dj_trace(f, QubitSubset.first(1))

    p_zero = born_distribution(trace.steps[-1].state, QubitSubset.first(1)).p('0')
    if min(p_zero, 1.0 - p_zero) > EXACT_TOL:
        raise InvariantViolation(f"Deutsch outcome is not deterministic: p(0) = {p_zero!r}")

    outcome = '0' if p_zero > 0.5 else '1'
    verdict = 'constant' if outcome == '0' else 'balanced'
    logger.info(f"Deutsch verdict: {verdict}")
    return RunResult('deutsch', (trace,), outcome, 1, verdict, {'p_zero': p_zero})


def run_deutsch_jozsa(f: TruthTable, n: Optional[int] = None,
                      subset: Optional[QubitSubset] = None) -> RunResult:
    """Decide constant versus balanced from one application of the QAG."""
    n = f.n_in if n is None else n
    if f.n_in != n or f.n_out != 1:
        raise ArityError(f"Deutsch-Jozsa with n={n} needs an ({n}, 1) truth table, got ({f.n_in}, {f.n_out})")
    register = QubitSubset.first(n)
    trace = _dj_trace(f, subset or register)

    final = trace.steps[-1].state
    p_zero = born_distribution(final, register).p('0' * n)
    verdict = 'constant' if p_zero > 0.5 else 'balanced'
    outcome = select_intelligent_state(final, register)
    logger.info(f"Deutsch-Jozsa verdict: {verdict} (p(0...0) = {p_zero:.12g})")
    return RunResult('deutsch-jozsa', (trace,), outcome, 1, verdict, {'p_zero': p_zero})


def run_linear_deutsch_jozsa(n: int, k: str, negate: bool = False) -> RunResult:
    """Deutsch-Jozsa on f(x) = k·x mod 2; the output register is exactly |k>."""
    result = run_deutsch_jozsa(TruthTable.inner_product(n, k, negate))
    p_k = born_distribution(result.final_state, QubitSubset.first(n)).p(k)
    if abs(p_k - 1.0) > EXACT_TOL:
        raise InvariantViolation(f"Linear function k={k} produced p({k}) = {p_k!r}")
    return result


def extract_period(peaks: Sequence[int], n: int) -> int:
    """r = 2^n / gcd(nonzero observed outcomes and 2^n)."""
    size = 2 ** n
    peaks = [int(p) for p in peaks]
    bad = [p for p in peaks if not 0 <= p < size]
    if bad:
        raise ValidationError(f"Outcomes {bad} out of range for a {n}-qubit register")
    nonzero = [p for p in peaks if p]
    if not nonzero:
        raise IndeterminatePeriodError("Only zero outcomes observed; more samples are needed to fix the period")
    return size // fold(math.gcd, nonzero, size)


def _peaked_period(dist: ProbabilityDistribution, n: int) -> Optional[int]:
    """Period r when dist is uniform on the multiples of 2^n/r, else None."""
    support = [int(label, 2) for label in dist.support(EXACT_TOL)]
    r = 1 if support == [0] else extract_period(support, n)
    step = 2 ** n // r
    expected = np.zeros(2 ** n)
    expected[::step] = 1.0 / r
    if np.max(np.abs(dist.probabilities - expected)) > EXACT_TOL:
        return None
    return r


def run_shor_period(f: TruthTable, subset: Optional[QubitSubset] = None) -> RunResult:
    """Period finding with QFT superposition and interference over a 2n-qubit register."""
    if f.n_in != f.n_out:
        raise ArityError(f"Period finding needs n_in == n_out, got ({f.n_in}, {f.n_out})")
    n = f.n_in
    register = QubitSubset.first(n)
    subset = subset or register
    subset.validate(2 * n)
    trace = _run_single_pass(shor_plan(f), basis_state(2 * n, '0' * (2 * n)), subset)

    final = trace.steps[-1].state
    dist = born_distribution(final, register)
    r = _peaked_period(dist, n)
    outcome = select_intelligent_state(final, register)
    if r is None:
        logger.warning(f"Period-finding output is not peaked; f has no period dividing 2^{n}")
        return RunResult('shor', (trace,), outcome, 1, 'aperiodic', {'peaked': False})

    logger.info(f"Period-finding verdict: r = {r}")
    return RunResult('shor', (trace,), outcome, 1, str(r), {'peaked': True, 'period': r})


def default_horizon(n: int) -> int:
    """ceil(π/4·√N) + 3 search iterations for N = 2^n."""
    return math.ceil(math.pi / 4 * math.sqrt(2 ** n)) + 3


def _grover_theta(n: int) -> float:
    return math.asin(2 ** (-n / 2))


def optimal_iterations(n: int) -> int:
    """Nearest integer to π/(4θ) − ½, at least 1."""
    return max(1, round(math.pi / (4 * _grover_theta(n)) - 0.5))


def _check_amplitude_law(n: int, k: int, p_marked: float) -> float:
    expected = math.sin((2 * k + 1) * _grover_theta(n)) ** 2
    if abs(p_marked - expected) > EXACT_TOL:
        raise InvariantViolation(f"Search n={n}, k={k}: p(marked) = {p_marked!r}, expected {expected!r}")
    return expected


def _grover_iterate(n: int, marked: str, horizon: int, subset: QubitSubset,
                    granularity: str) -> Tuple[List[StepTrace], List[StateVector]]:
    """Traces and states for k = 0 ... horizon; every state is checked against the amplitude law."""
    if len(marked) != n or any(c not in '01' for c in marked):
        raise ValidationError(f"Marked item '{marked}' is not a {n}-bit string")
    if granularity not in GRANULARITIES:
        raise ValidationError(f"Unknown granularity '{granularity}'")
    subset.validate(n + 1)
    register = QubitSubset.first(n)
    plan = grover_plan(n, marked)

    start = basis_state(n + 1, '0' * n + '1')
    state = start.evolve(plan.superposition)
    traces = [StepTrace(0, (_record('input', start, subset), _record('superposition', state, subset)))]
    states = [state]
    _check_amplitude_law(n, 0, born_distribution(state, register).p(marked))

    for k in range(1, horizon + 1):
        steps = []
        state = state.evolve(plan.entanglement)
        if granularity == 'substep':
            steps.append(_record('entanglement', state, subset))
        state = state.evolve(plan.interference)
        steps.append(_record('interference', state, subset))
        traces.append(StepTrace(k, tuple(steps)))
        states.append(state)
        _check_amplitude_law(n, k, born_distribution(state, register).p(marked))
    return traces, states


def run_grover(n: int, marked: str, k: int, granularity: str = 'substep',
               subset: Optional[QubitSubset] = None) -> RunResult:
    """k search iterations on marked; k = 0 stops after superposition."""
    if k < 0:
        raise ValidationError(f"Iteration count k={k} must be non-negative")
    register = QubitSubset.first(n)
    traces, states = _grover_iterate(n, marked, k, subset or register, granularity)

    final = states[-1]
    p_marked = born_distribution(final, register).p(marked)
    outcome = select_intelligent_state(final, register)
    logger.info(f"Search n={n}, k={k}: p(marked) = {p_marked:.12g}, outcome {outcome}")
    return RunResult('grover', tuple(traces), outcome, k, outcome,
                     {'p_marked': p_marked, 'theta': _grover_theta(n)})


def termination_scan(config: AlgorithmConfig) -> RunResult:
    """Stop the search at the first iteration whose first-register Shannon entropy is not above the next one."""
    if config.algorithm != 'grover':
        raise ValidationError(f"Termination scan needs an iterative algorithm, got {config.algorithm}")
    n = config.n
    marked = config.oracle
    register = QubitSubset.first(n)
    tie_tol = get_config().tie_tol
    traces, states = _grover_iterate(n, marked, config.max_iterations, config.subset, config.granularity)

    scan = []
    for k, state in enumerate(states):
        dist = born_distribution(state, register)
        scan.append({'k': k, 'shannon': shannon_full(dist), 'p_marked': dist.p(marked)})

    # First local minimum after at least one oracle call; near-ties stop early
    horizon = len(scan) - 1
    stop = next(
        (k for k in range(1, horizon) if scan[k]['shannon'] <= scan[k + 1]['shannon'] + tie_tol),
        horizon,
    )
    outcome = select_intelligent_state(states[stop], register)

    logger.info(f"Termination scan n={n}: stop at k={stop}, shannon={scan[stop]['shannon']:.12g}, outcome {outcome}")
    return RunResult('grover', tuple(traces[:stop + 1]), outcome, stop, outcome,
                     {'p_marked': scan[stop]['p_marked'], 'theta': _grover_theta(n), 'scan': scan})


def grover_lower_bound(N: int, p_error: float) -> float:
    """Oracle-call lower bound ((1 − Pe)/(2π) + 1/(π log₂ N))·√N."""
    if N < 2:
        raise ValidationError(f"Database size N={N} must be at least 2")
    if not 0.0 <= p_error <= 1.0:
        raise ValidationError(f"Error probability {p_error!r} outside [0, 1]")
    return ((1.0 - p_error) / (2 * math.pi) + 1.0 / (math.pi * math.log2(N))) * math.sqrt(N)


def grover_diffusion_contrast(n: int) -> Tuple[float, float]:
    """Marked and unmarked probabilities after one oracle and diffusion step."""
    size = 2 ** n
    b = 2.0 / size
    a = 1.0 - b
    marked_p = (a + (size - 1) * b) ** 2 / size
    unmarked_p = (a - (size - 3) * b) ** 2 / size

    result = run_grover(n, '0' * n, 1)
    dist = born_distribution(result.final_state, QubitSubset.first(n))
    unmarked = '0' * (n - 1) + '1'
    if abs(dist.p('0' * n) - marked_p) > EXACT_TOL or abs(dist.p(unmarked) - unmarked_p) > EXACT_TOL:
        raise InvariantViolation(f"Diffusion contrast for n={n} disagrees with simulation")
    return marked_p, unmarked_p


def holevo_deutsch_efficiency(f: TruthTable, purity: float = 1.0) -> float:
    """Accessible information separating f from its opposite-class partner f ⊕ x, for a mixed first-qubit input."""
    if (f.n_in, f.n_out) != (1, 1):
        raise ArityError(f"Deutsch efficiency needs a 1-bit function, got ({f.n_in}, {f.n_out})")
    if not 0.5 <= purity <= 1.0:
        raise ValidationError(f"Qubit purity {purity!r} outside [0.5, 1]")
    # diag(λ, 1 − λ) has purity λ² + (1 − λ)²
    lam = (1.0 + math.sqrt(max(2.0 * purity - 1.0, 0.0))) / 2.0
    partner = TruthTable.from_function(1, 1, lambda x: f.value(x) ^ x)

    first = QubitSubset.first(1)
    outputs = []
    for g in (f, partner):
        gate = compose_qag(deutsch_jozsa_plan(g))
        branches = [reduce(basis_state(2, f"{b}1").evolve(gate), first) for b in (0, 1)]
        outputs.append(DensityMatrix.mixture(branches, [lam, 1.0 - lam]))
    return holevo_accessible(outputs, [0.5, 0.5])


def run(config: AlgorithmConfig) -> RunResult:
    """Dispatch config to its algorithm."""
    logger.info(f"Running {config.algorithm} with n={config.n}")
    if config.algorithm == 'deutsch':
        return run_deutsch(config.oracle)
    if config.algorithm == 'deutsch-jozsa':
        return run_deutsch_jozsa(config.oracle, config.n, config.analysis_subset)
    if config.algorithm == 'shor':
        return run_shor_period(config.oracle, config.analysis_subset)
    if config.scan:
        return termination_scan(config)
    return run_grover(config.n, config.oracle, config.max_iterations, config.granularity, config.analysis_subset)


def run_sweep(configs: Sequence[AlgorithmConfig], workers: Optional[int] = None) -> List[RunResult]:
    """Run independent configurations concurrently; results keep the input order."""
    workers = workers or get_config().sweep_workers
    logger.info(f"Sweeping {len(configs)} runs on {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run, configs))
