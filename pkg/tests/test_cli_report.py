import csv
import io
import json
import math

import pytest

import cli_report
from algorithm_runner import AlgorithmConfig, run
from cli_report import (RunRequest, build_document, build_parser, compute_measures, document_to_csv, document_to_json,
                        emit_plot_series, format_oracle, main, parse_document, parse_oracle_file, parse_oracle_text,
                        render_table, run_command)
from errors import DocumentError, InvariantViolation, OracleParseError, ValidationError


def document(config, fmt='json'):
    return build_document(run(config), RunRequest(config, None, fmt))


def numeric_leaves(node, path=()):
    if isinstance(node, dict):
        for key, value in node.items():
            yield from numeric_leaves(value, path + (key,))
    elif isinstance(node, list):
        for index, value in enumerate(node):
            yield from numeric_leaves(value, path + (index,))
    elif isinstance(node, float):
        yield path, node


class TestParser:
    def test_run_arguments(self):
        args = build_parser().parse_args(['run', 'grover', '--marked', '001', '--scan', '--format', 'json'])
        assert args.algorithm == 'grover'
        assert args.marked == '001'
        assert args.scan
        assert args.granularity == 'substep'

    def test_bound_arguments(self):
        args = build_parser().parse_args(['bound', 'grover', '--n', '3', '--pe', '0.1'])
        assert args.n == 3
        assert args.pe == pytest.approx(0.1)

    def test_unknown_algorithm_exits_one(self):
        assert main(['run', 'simon']) == 1

    def test_version(self, capsys):
        assert main(['--version']) == 0
        assert 'qa-intel' in capsys.readouterr().out


class TestOracleFiles:
    def test_fixtures_parse(self, fixtures_dir, balanced_table, period2_table, period4_table, constant_table):
        assert parse_oracle_file(fixtures_dir / 'constant.tt').rows == constant_table.rows
        assert parse_oracle_file(fixtures_dir / 'balanced.tt').rows == balanced_table.rows
        assert parse_oracle_file(fixtures_dir / 'period2.tt').rows == period2_table.rows
        assert parse_oracle_file(fixtures_dir / 'period4.tt').rows == period4_table.rows

    def test_format_round_trip(self, period4_table):
        assert parse_oracle_text(format_oracle(period4_table)).rows == period4_table.rows

    def test_missing_row(self):
        with pytest.raises(OracleParseError, match='10'):
            parse_oracle_text('00 1\n01 0\n11 1\n')

    def test_duplicate_row_reports_line(self):
        with pytest.raises(OracleParseError) as info:
            parse_oracle_text('# header\n0 1\n0 0\n1 1\n')
        assert info.value.line_number == 3

    def test_mixed_arity(self):
        with pytest.raises(OracleParseError) as info:
            parse_oracle_text('00 1\n01 10\n')
        assert info.value.line_number == 2

    def test_non_binary(self):
        with pytest.raises(OracleParseError):
            parse_oracle_text('0 2\n1 0\n')

    def test_empty(self):
        with pytest.raises(OracleParseError):
            parse_oracle_text('# nothing here\n')

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(OracleParseError):
            parse_oracle_file(tmp_path / 'absent.tt')


class TestDocuments:
    def test_json_round_trip(self, balanced_table):
        doc = document(AlgorithmConfig('deutsch-jozsa', 3, balanced_table))
        parsed = parse_document(document_to_json(doc))
        original = dict(numeric_leaves(doc))
        restored = dict(numeric_leaves(parsed))
        assert original.keys() == restored.keys()
        for path, value in original.items():
            assert restored[path] == pytest.approx(value, abs=1e-12)
        assert parsed['verdict'] == 'balanced'

    def test_alpha_on_deutsch_jozsa_only(self, balanced_table, period2_table):
        dj = document(AlgorithmConfig('deutsch-jozsa', 3, balanced_table))
        assert dj['steps'][2]['per_qubit']['alpha'] == [0.0, 0.0, 0.0, None]
        shor = document(AlgorithmConfig('shor', 3, period2_table))
        assert 'alpha' not in shor['steps'][2]['per_qubit']

    def test_parse_rejects_bad_documents(self):
        with pytest.raises(DocumentError):
            parse_document('{not json')
        with pytest.raises(DocumentError):
            parse_document('[]')
        with pytest.raises(DocumentError):
            parse_document(json.dumps({'schema_version': '1.0'}))
        with pytest.raises(DocumentError):
            parse_document(json.dumps({'schema_version': '9', 'request': {}, 'steps': [], 'verdict': 'x',
                                       'stop_iteration': 0}))

    def test_csv_is_deterministic(self, period4_table):
        config = AlgorithmConfig('shor', 3, period4_table)
        assert document_to_csv(document(config)) == document_to_csv(document(config))

    def test_csv_layout(self, period2_table):
        rows = list(csv.reader(io.StringIO(document_to_csv(document(AlgorithmConfig('shor', 3, period2_table))))))
        assert rows[0][:6] == ['iteration', 'label', 'shannon', 'von_neumann', 'intelligence', 'noise']
        assert rows[0][-1] == 'von_neumann_q6'
        assert len(rows) == 5

    def test_csv_matches_json_exactly(self, balanced_table):
        doc = document(AlgorithmConfig('deutsch-jozsa', 3, balanced_table))
        parsed = parse_document(document_to_json(doc))
        rows = list(csv.DictReader(io.StringIO(document_to_csv(doc))))
        assert len(rows) == len(parsed['steps'])
        for row, step in zip(rows, parsed['steps']):
            assert int(row['iteration']) == step['iteration']
            assert row['label'] == step['label']
            for key in ('shannon', 'von_neumann', 'intelligence', 'noise'):
                assert float(row[key]) == step['subset'][key]
            for j, value in enumerate(step['per_qubit']['shannon'], start=1):
                assert float(row[f'shannon_q{j}']) == value
            for j, value in enumerate(step['per_qubit']['von_neumann'], start=1):
                assert float(row[f'von_neumann_q{j}']) == value

    def test_plot_series(self, constant_table):
        series = emit_plot_series(document(AlgorithmConfig('deutsch-jozsa', 3, constant_table)))
        rows = list(csv.reader(io.StringIO(series)))
        assert rows[0] == ['step', 'label', 'shannon', 'von_neumann', 'intelligence']
        assert len(rows) == 5
        assert rows[-1][1] == 'interference'
        assert float(rows[-1][2]) == pytest.approx(0.0, abs=1e-9)
        assert float(rows[-1][4]) == pytest.approx(1.0, abs=1e-9)

    def test_empty_table_is_header_only(self):
        text = render_table({'steps': []})
        lines = text.splitlines()
        assert len(lines) == 2
        assert lines[0].startswith('Step | Shannon (per qubit) = sum')

    def test_table_has_no_negative_zero(self, balanced_table):
        text = render_table(document(AlgorithmConfig('deutsch-jozsa', 3, balanced_table)))
        assert '-0.0000' not in text

    def test_bad_format(self, constant_table):
        with pytest.raises(ValidationError):
            RunRequest(AlgorithmConfig('deutsch-jozsa', 3, constant_table), output_format='xml')


class TestRunCommand:
    def test_verdict_is_last_line(self, balanced_table):
        out = io.StringIO()
        assert run_command(RunRequest(AlgorithmConfig('deutsch-jozsa', 3, balanced_table)), out) == 0
        lines = out.getvalue().splitlines()
        assert lines[-1] == 'verdict=balanced stop_iteration=1 outcome=010'
        assert len(lines) == 2 + 4 + 1

    def test_trace_file_takes_json(self, tmp_path, constant_table):
        trace = tmp_path / 'trace.json'
        out = io.StringIO()
        run_command(RunRequest(AlgorithmConfig('deutsch-jozsa', 3, constant_table), None, 'json', str(trace)), out)
        assert out.getvalue().splitlines() == ['verdict=constant stop_iteration=1 outcome=000']
        assert parse_document(trace.read_text())['chosen_outcome'] == '000'


class TestMain:
    def test_deutsch_jozsa_table(self, fixtures_dir, capsys):
        code = main(['run', 'deutsch-jozsa', '--oracle', str(fixtures_dir / 'balanced.tt'), '--format', 'table'])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert [line.split(' | ')[0].strip() for line in lines[2:6]] == [
            '1:input', '1:superposition', '1:entanglement', '1:interference'
        ]
        assert lines[-1].startswith('verdict=balanced')

    def test_grover_scan_trace(self, tmp_path, capsys):
        trace = tmp_path / 'scan.json'
        code = main(['run', 'grover', '--n', '3', '--marked', '001', '--scan', '--iterations', '8',
                     '--format', 'json', '--trace', str(trace)])
        assert code == 0
        doc = parse_document(trace.read_text())
        assert doc['stop_iteration'] == 2
        assert doc['chosen_outcome'] == '001'
        assert len(doc['details']['scan']) == 9
        assert capsys.readouterr().out.strip() == 'verdict=001 stop_iteration=2 outcome=001'

    def test_shor_csv(self, fixtures_dir, capsys):
        assert main(['run', 'shor', '--oracle', str(fixtures_dir / 'period2.tt'), '--format', 'csv']) == 0
        out = capsys.readouterr().out.splitlines()
        rows = list(csv.reader(out[:-1]))
        values = [(float(r[2]), float(r[3]), float(r[4])) for r in rows[1:]]
        expected = [(0, 0, 1), (3, 0, 0), (3, 1, 1 / 3), (1, 1, 1)]
        assert len(values) == 4
        for got, want in zip(values, expected):
            assert got == pytest.approx(want, abs=1e-9)
        assert out[-1].startswith('verdict=2')

    def test_plot_file(self, fixtures_dir, tmp_path, capsys):
        plot = tmp_path / 'series.csv'
        main(['run', 'deutsch-jozsa', '--oracle', str(fixtures_dir / 'constant.tt'), '--plot', str(plot)])
        assert len(plot.read_text().splitlines()) == 5

    def test_arity_mismatch_exits_one(self, fixtures_dir):
        assert main(['run', 'deutsch', '--oracle', str(fixtures_dir / 'balanced.tt')]) == 1

    def test_missing_oracle_exits_one(self, tmp_path):
        assert main(['run', 'shor', '--oracle', str(tmp_path / 'absent.tt')]) == 1

    def test_internal_failure_exits_two(self, fixtures_dir, monkeypatch):
        def explode(config):
            raise RuntimeError('boom')

        monkeypatch.setattr(cli_report, 'run', explode)
        assert main(['run', 'deutsch-jozsa', '--oracle', str(fixtures_dir / 'constant.tt')]) == 2

    def test_invariant_violation_exits_two(self, fixtures_dir, monkeypatch):
        def violate(config):
            raise InvariantViolation('trace is not 1')

        monkeypatch.setattr(cli_report, 'run', violate)
        assert main(['run', 'deutsch-jozsa', '--oracle', str(fixtures_dir / 'constant.tt')]) == 2

    def test_sweep_rejects_non_integer_size(self, tmp_path):
        assert main(['scan', 'grover', '--sweep', '2,x', '--trace', str(tmp_path / 'sweep.json')]) == 1
        assert not list(tmp_path.iterdir())

    def test_sweep_writes_one_file_per_size(self, tmp_path, capsys):
        trace = tmp_path / 'sweep.json'
        assert main(['scan', 'grover', '--sweep', '2,3', '--trace', str(trace)]) == 0
        for n, stop in ((2, 1), (3, 2)):
            doc = parse_document((tmp_path / f'sweep-n{n}.json').read_text())
            assert doc['stop_iteration'] == stop
        assert len(capsys.readouterr().out.splitlines()) == 2

    def test_sweep_needs_trace(self):
        assert main(['scan', 'grover', '--sweep', '2,3']) == 1

    def test_bound(self, capsys):
        assert main(['bound', 'grover', '--n', '3']) == 0
        report = json.loads(capsys.readouterr().out)
        assert report['N'] == 8
        assert report['bound'] == pytest.approx(0.7503, abs=1e-4)
        assert report['optimal_iterations'] == 2


class TestMeasures:
    def test_distribution(self):
        report = compute_measures({'distribution': {'0': 0.5, '1': 0.5}, 'q': [2]})
        assert report['shannon_bits'] == pytest.approx(1.0)
        assert report['renyi_nats']['2.0'] == pytest.approx(math.log(2))
        assert report['tsallis']['2.0'] == pytest.approx(0.5)

    def test_density_with_reference(self):
        report = compute_measures({
            'density': {'real': [[0.5, 0.0], [0.0, 0.5]]},
            'reference': {'real': [[0.5, 0.0], [0.0, 0.5]]},
        })
        assert report['von_neumann_bits'] == pytest.approx(1.0)
        assert report['relative_entropy_nats'] == pytest.approx(0.0, abs=1e-12)

    def test_needs_one_kind(self):
        with pytest.raises(DocumentError):
            compute_measures({})

    def test_from_file(self, tmp_path, capsys):
        path = tmp_path / 'dist.json'
        path.write_text(json.dumps({'distribution': {'00': 1.0, '01': 0.0, '10': 0.0, '11': 0.0}}))
        assert main(['measures', str(path)]) == 0
        assert json.loads(capsys.readouterr().out)['shannon_bits'] == pytest.approx(0.0, abs=1e-12)

    def test_bad_json_exits_one(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{')
        assert main(['measures', str(path)]) == 1
