# cli_report.py
"""
Command-line front end and trace export.

Verbs:
  run <algorithm>   run deutsch, deutsch-jozsa, shor or grover
  scan grover       min-entropy termination scan (optionally swept over n)
  measures <file>   generalized entropies of a serialized distribution or density
  bound grover      oracle-call lower bound next to the simulated optimum

Data goes to stdout (or --trace/--plot files); diagnostics go to the log on stderr.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO

import numpy as np

from algorithm_runner import (ALGORITHMS, GRANULARITIES, AlgorithmConfig, RunResult, default_horizon,
                              grover_lower_bound, optimal_iterations, run, run_sweep, termination_scan)
from errors import DocumentError, OracleParseError, SimulationError, ValidationError
from gate_forge import TruthTable
from info_measures import relative_entropy, renyi, shannon_full, tsallis, von_neumann
from logger import VERSION, get_logger
from quantum_state import DensityMatrix, ProbabilityDistribution, QubitSubset, bit_label

logger = get_logger('cli')

SCHEMA_VERSION = '1.0'
FORMATS = ('json', 'csv', 'table')
PLOT_COLUMNS = ('step', 'label', 'shannon', 'von_neumann', 'intelligence')
DEFAULT_ORDERS = (0.5, 2.0, 3.0)


# Oracle files

def parse_oracle_text(text: str) -> TruthTable:
    """Parse `<input-bits> <output-bits>` rows; `#` starts a comment."""
    rows: Dict[str, str] = {}
    arity = None

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise OracleParseError(f"expected '<input> <output>', got '{line}'", line_number)
        x, y = parts
        if any(c not in '01' for c in x + y):
            raise OracleParseError(f"non-binary row '{line}'", line_number)
        if arity is None:
            arity = (len(x), len(y))
        elif (len(x), len(y)) != arity:
            raise OracleParseError(
                f"row arity ({len(x)}, {len(y)}) differs from first row arity {arity}", line_number
            )
        if x in rows:
            raise OracleParseError(f"duplicate input {x}", line_number)
        rows[x] = y

    if arity is None:
        raise OracleParseError("oracle has no rows")
    n_in, n_out = arity
    missing = [bit_label(i, n_in) for i in range(2 ** n_in) if bit_label(i, n_in) not in rows]
    if missing:
        raise OracleParseError(f"missing input(s) {', '.join(missing)}")
    return TruthTable(n_in, n_out, rows)


def parse_oracle_file(path) -> TruthTable:
    """Load a truth table from an oracle file."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise OracleParseError(f"cannot read oracle file {path}: {e}") from e
    table = parse_oracle_text(text)
    logger.info(f"Loaded oracle {path}: {table.n_in} -> {table.n_out} bits")
    return table


def format_oracle(f: TruthTable) -> str:
    return f.format()


# Trace documents

@dataclass(frozen=True)
class RunRequest:
    config: AlgorithmConfig
    oracle_source: Optional[str] = None
    output_format: str = 'table'
    trace_path: Optional[str] = None
    plot_path: Optional[str] = None

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise ValidationError(f"Unknown output format '{self.output_format}'")

    def to_dict(self) -> Dict[str, Any]:
        echo = self.config.to_dict()
        echo.update({'oracle_source': self.oracle_source, 'format': self.output_format})
        return echo


def _step_dict(iteration: int, step) -> Dict[str, Any]:
    alphas = [r.alpha for r in step.per_qubit]
    entry = {
        'iteration': int(iteration),
        'label': step.label,
        'per_qubit': {
            'shannon': [float(r.shannon_bits) for r in step.per_qubit],
            'von_neumann': [float(r.von_neumann_bits) for r in step.per_qubit],
            'intelligence': [float(r.intelligence) for r in step.per_qubit],
        },
        'subset': {
            'qubits': list(step.subset.subset.indices),
            'shannon': float(step.subset.shannon_bits),
            'von_neumann': float(step.subset.von_neumann_bits),
            'intelligence': float(step.subset.intelligence),
            'noise': float(step.subset.noise_bits),
        },
        'distribution': step.distribution.as_dict(),
    }
    if any(a is not None for a in alphas):
        entry['per_qubit']['alpha'] = [None if a is None else float(a) for a in alphas]
    return entry


def build_document(result: RunResult, request: RunRequest) -> Dict[str, Any]:
    """Serializable trace document for one run."""
    return {
        'schema_version': SCHEMA_VERSION,
        'request': request.to_dict(),
        'steps': [_step_dict(iteration, step) for iteration, step in result.steps()],
        'verdict': result.verdict,
        'stop_iteration': int(result.stop_iteration),
        'chosen_outcome': result.chosen_outcome,
        'details': result.details,
    }


def document_to_json(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + '\n'


_REQUIRED_KEYS = ('schema_version', 'request', 'steps', 'verdict', 'stop_iteration')
_STEP_KEYS = ('iteration', 'label', 'per_qubit', 'subset', 'distribution')


def parse_document(text: str) -> Dict[str, Any]:
    """Parse and structurally validate a serialized trace document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"Trace document is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise DocumentError("Trace document must be a JSON object")

    missing = [key for key in _REQUIRED_KEYS if key not in doc]
    if missing:
        raise DocumentError(f"Trace document lacks {', '.join(missing)}")
    if doc['schema_version'] != SCHEMA_VERSION:
        raise DocumentError(f"Unsupported schema version {doc['schema_version']!r}")
    for index, step in enumerate(doc['steps']):
        absent = [key for key in _STEP_KEYS if key not in step]
        if absent:
            raise DocumentError(f"Step {index} lacks {', '.join(absent)}")
    return doc


def document_to_csv(doc: Dict[str, Any]) -> str:
    """One row per step; numbers at full double precision."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    width = len(doc['steps'][0]['per_qubit']['shannon']) if doc['steps'] else 0

    header = ['iteration', 'label', 'shannon', 'von_neumann', 'intelligence', 'noise']
    header += [f'shannon_q{j}' for j in range(1, width + 1)]
    header += [f'von_neumann_q{j}' for j in range(1, width + 1)]
    writer.writerow(header)

    for step in doc['steps']:
        subset = step['subset']
        row = [step['iteration'], step['label']]
        row += [repr(float(subset[key])) for key in ('shannon', 'von_neumann', 'intelligence', 'noise')]
        row += [repr(float(v)) for v in step['per_qubit']['shannon']]
        row += [repr(float(v)) for v in step['per_qubit']['von_neumann']]
        writer.writerow(row)
    return buffer.getvalue()


def emit_plot_series(doc: Dict[str, Any]) -> str:
    """Step-indexed entropy series for plotting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(PLOT_COLUMNS)
    for index, step in enumerate(doc['steps']):
        subset = step['subset']
        writer.writerow([index, step['label']] + [
            format(float(subset[key]), '.12g') for key in ('shannon', 'von_neumann', 'intelligence')
        ])
    return buffer.getvalue()


def _fixed(value: float) -> str:
    text = f"{value:.4f}"
    return '0.0000' if text == '-0.0000' else text


def render_table(doc: Dict[str, Any]) -> str:
    """Fixed-width Step | Shannon | von Neumann | J_T table."""
    header = ('Step', 'Shannon (per qubit) = sum', 'von Neumann (per qubit)', 'J_T')
    rows = []
    for step in doc['steps']:
        shannon = step['per_qubit']['shannon']
        vn = step['per_qubit']['von_neumann']
        rows.append((
            f"{step['iteration']}:{step['label']}",
            f"({', '.join(_fixed(v) for v in shannon)}) = {_fixed(sum(shannon))}",
            f"({', '.join(_fixed(v) for v in vn)})",
            _fixed(step['subset']['intelligence']),
        ))

    widths = [max([len(header[i])] + [len(row[i]) for row in rows]) for i in range(len(header))]
    lines = [' | '.join(cell.ljust(w) for cell, w in zip(header, widths)).rstrip()]
    lines.append('-+-'.join('-' * w for w in widths))
    for row in rows:
        lines.append(' | '.join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return '\n'.join(lines) + '\n'


def verdict_line(result: RunResult) -> str:
    return f"verdict={result.verdict} stop_iteration={result.stop_iteration} outcome={result.chosen_outcome}"


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding='utf-8')
    logger.info(f"Wrote {path}")


def run_command(req: RunRequest, out: Optional[TextIO] = None) -> int:
    """Execute one request and emit its artifacts; the verdict line is printed last."""
    out = out or sys.stdout
    result = run(req.config)
    doc = build_document(result, req)

    if req.trace_path:
        _write(req.trace_path, document_to_json(doc))
    if req.plot_path:
        _write(req.plot_path, emit_plot_series(doc))

    if req.output_format == 'json' and not req.trace_path:
        out.write(document_to_json(doc))
    elif req.output_format == 'csv':
        out.write(document_to_csv(doc))
    elif req.output_format == 'table':
        out.write(render_table(doc))

    print(verdict_line(result), file=out)
    return 0


# Measures

def _load_measurable(kind: str, value: Any):
    try:
        if kind == 'distribution':
            return ProbabilityDistribution.from_mapping({str(k): float(v) for k, v in value.items()})
        matrix = np.asarray(value['real'], dtype=float) + 1j * np.asarray(value.get('imag', 0.0), dtype=float)
        return DensityMatrix.from_matrix(matrix)
    except (AttributeError, KeyError, TypeError) as e:
        raise DocumentError(f"Malformed {kind} entry: {e}") from e


def compute_measures(payload: Dict[str, Any]) -> Dict[str, Any]:
    """Entropies of the distribution or density described by payload."""
    kinds = [kind for kind in ('distribution', 'density') if kind in payload]
    if len(kinds) != 1:
        raise DocumentError("Measures input needs exactly one of 'distribution' or 'density'")
    kind = kinds[0]
    target = _load_measurable(kind, payload[kind])
    orders = [float(q) for q in payload.get('q', DEFAULT_ORDERS)]

    report: Dict[str, Any] = {'kind': kind}
    if kind == 'distribution':
        report['shannon_bits'] = shannon_full(target)
    else:
        report['von_neumann_bits'] = von_neumann(target)
    report['renyi_nats'] = {repr(q): renyi(target, q) for q in orders}
    report['tsallis'] = {repr(q): tsallis(target, q) for q in orders}
    if 'reference' in payload:
        report['relative_entropy_nats'] = relative_entropy(target, _load_measurable(kind, payload['reference']))
    return report


# Command handlers

def _subset(args) -> Optional[QubitSubset]:
    return QubitSubset.parse(args.subset) if args.subset else None


def _search_config(args, scan: bool) -> AlgorithmConfig:
    if args.oracle:
        oracle = parse_oracle_file(args.oracle)
        n = args.n or oracle.n_in
    elif args.marked:
        oracle = args.marked
        n = args.n or len(args.marked)
    else:
        raise ValidationError("grover needs --marked or --oracle")
    if args.iterations is not None:
        iterations = args.iterations
    else:
        iterations = default_horizon(n) if scan else optimal_iterations(n)
    return AlgorithmConfig('grover', n, oracle, max_iterations=iterations, analysis_subset=_subset(args),
                           granularity=args.granularity, scan=scan)


def _handle_run(args) -> int:
    if args.algorithm == 'grover':
        config = _search_config(args, args.scan)
        source = args.oracle or args.marked
    else:
        if not args.oracle:
            raise ValidationError(f"{args.algorithm} needs --oracle <file>")
        table = parse_oracle_file(args.oracle)
        n = args.n or (1 if args.algorithm == 'deutsch' else table.n_in)
        config = AlgorithmConfig(args.algorithm, n, table, analysis_subset=_subset(args),
                                 granularity=args.granularity)
        source = args.oracle
    request = RunRequest(config, source, args.format, args.trace, args.plot)
    return run_command(request)


def _sweep_path(trace: str, n: int) -> Path:
    path = Path(trace)
    return path.with_name(f"{path.stem}-n{n}{path.suffix or '.json'}")


def _handle_scan(args) -> int:
    if not args.sweep:
        return run_command(RunRequest(_search_config(args, True), args.oracle or args.marked, args.format,
                                      args.trace, args.plot))

    if not args.trace:
        raise ValidationError("--sweep needs --trace to name the output files")
    if args.marked or args.oracle:
        raise ValidationError("--sweep marks 0...01 at every size; drop --marked/--oracle")
    try:
        sizes = [int(part) for part in args.sweep.split(',') if part.strip()]
    except ValueError as e:
        raise ValidationError(f"Bad --sweep list '{args.sweep}': expected comma-separated qubit counts") from e
    configs = [
        AlgorithmConfig('grover', n, '0' * (n - 1) + '1',
                        max_iterations=args.iterations or default_horizon(n),
                        granularity=args.granularity, scan=True)
        for n in sizes
    ]
    for n, config, result in zip(sizes, configs, run_sweep(configs)):
        request = RunRequest(config, config.oracle, 'json', str(_sweep_path(args.trace, n)))
        _write(request.trace_path, document_to_json(build_document(result, request)))
        print(f"n={n} {verdict_line(result)}")
    return 0


def _handle_measures(args) -> int:
    try:
        payload = json.loads(Path(args.file).read_text(encoding='utf-8'))
    except OSError as e:
        raise ValidationError(f"cannot read {args.file}: {e}") from e
    except json.JSONDecodeError as e:
        raise DocumentError(f"{args.file} is not valid JSON: {e}") from e
    if not isinstance(payload, dict):
        raise DocumentError("Measures input must be a JSON object")
    print(json.dumps(compute_measures(payload), indent=2))
    return 0


def _handle_bound(args) -> int:
    size = 2 ** args.n
    scan = termination_scan(AlgorithmConfig('grover', args.n, '0' * (args.n - 1) + '1',
                                            max_iterations=default_horizon(args.n), scan=True))
    report = {
        'N': size,
        'p_error': args.pe,
        'bound': grover_lower_bound(size, args.pe),
        'optimal_iterations': scan.stop_iteration,
    }
    print(json.dumps(report, indent=2))
    return 0


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--n', type=int, help='Source-register qubit count (inferred from the oracle if omitted)')
    parser.add_argument('--oracle', help='Oracle truth-table file')
    parser.add_argument('--marked', help='Marked item for grover, e.g. 001')
    parser.add_argument('--iterations', type=int, help='Grover iterations, or the scan horizon with --scan')
    parser.add_argument('--format', choices=FORMATS, default='table', help='Output format (default: table)')
    parser.add_argument('--trace', help='Write the JSON trace document to this file')
    parser.add_argument('--plot', help='Write the step,label,shannon,von_neumann,intelligence series here')
    parser.add_argument('--granularity', choices=GRANULARITIES, default='substep',
                        help='Record oracle and diffusion sub-steps or only whole iterations (default: substep)')
    parser.add_argument('--subset', help='Analysis subset as 1-based qubit positions, e.g. 1,2,3')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qa-intel',
        description='Entropy-instrumented simulator of Deutsch, Deutsch-Jozsa, period-finding and Grover algorithms',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    commands = parser.add_subparsers(dest='command', required=True)

    run_parser = commands.add_parser('run', help='Run one algorithm and report its entropy trace')
    run_parser.add_argument('algorithm', choices=ALGORITHMS)
    _add_run_flags(run_parser)
    run_parser.add_argument('--scan', action='store_true', help='Grover: stop at minimum first-register entropy')
    run_parser.set_defaults(handler=_handle_run)

    scan_parser = commands.add_parser('scan', help='Min-entropy termination scan')
    scan_parser.add_argument('algorithm', choices=('grover',))
    _add_run_flags(scan_parser)
    scan_parser.add_argument('--sweep', help='Comma-separated register sizes; one trace file per size')
    scan_parser.set_defaults(handler=_handle_scan)

    measures_parser = commands.add_parser('measures', help='Entropies of a serialized distribution or density')
    measures_parser.add_argument('file')
    measures_parser.set_defaults(handler=_handle_measures)

    bound_parser = commands.add_parser('bound', help='Oracle-call lower bound')
    bound_parser.add_argument('algorithm', choices=('grover',))
    bound_parser.add_argument('--n', type=int, required=True, help='Source-register qubit count')
    bound_parser.add_argument('--pe', type=float, default=0.0, help='Allowed error probability (default: 0)')
    bound_parser.set_defaults(handler=_handle_bound)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch, and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1

    try:
        return args.handler(args)
    except SimulationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return 1
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        return 2
