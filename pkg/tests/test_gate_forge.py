import numpy as np
import pytest

from errors import ArityError, DimensionError, QubitCeilingError, ValidationError
from gate_cache import GateCache, get_cache, reset_cache
from gate_forge import (NOT_GATE, GatePlan, TruthTable, compose_qag, deutsch_jozsa_plan, diffusion, grover_iteration,
                        grover_plan, hadamard_power, identity_gate, oracle_from_truth_table, phase_oracle, qft,
                        shor_plan)
from quantum_state import basis_state, uniform_state
from tensor_linalg import check_unitary, identity, tensor_all


class TestTruthTable:
    def test_rejects_missing_row(self):
        with pytest.raises(ValidationError, match='101'):
            TruthTable(3, 1, {format(i, '03b'): '0' for i in range(8) if i != 5})

    def test_rejects_bad_width(self):
        with pytest.raises(ValidationError):
            TruthTable(1, 1, {'0': '0', '1': '10'})

    def test_constant_and_balanced(self, constant_table, balanced_table):
        assert constant_table.is_constant() and not constant_table.is_balanced()
        assert balanced_table.is_balanced() and not balanced_table.is_constant()
        assert balanced_table('010') == '1'

    def test_indicator(self):
        f = TruthTable.indicator(3, '001')
        assert [x for x, y in f.rows.items() if y == '1'] == ['001']

    def test_period(self, period2_table, period4_table):
        assert period2_table.period() == 2
        assert period4_table.period() == 4
        assert TruthTable.periodic(3, 8).period() == 8

    def test_inner_product(self):
        f = TruthTable.inner_product(3, '101')
        assert f('111') == '0'
        assert f('100') == '1'
        assert TruthTable.inner_product(3, '101', negate=True)('100') == '0'

    def test_format_round_trip_rows(self, balanced_table):
        lines = balanced_table.format().splitlines()
        assert lines[0] == '000 1'
        assert len(lines) == 8


class TestFixedGates:
    def test_hadamard_power_matches_kron(self):
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        np.testing.assert_allclose(hadamard_power(3), tensor_all([h, h, h]), atol=1e-12)

    def test_hadamard_power_ceiling(self, monkeypatch):
        monkeypatch.setenv('QA_MAX_QUBITS', '3')
        with pytest.raises(QubitCeilingError):
            hadamard_power(4)

    def test_qft_entries(self):
        """Entries are 2^(-n/2) exp(2πi·jk/2^n) with 0-based indices"""
        q = qft(2)
        assert q[0, 0] == pytest.approx(0.5)
        assert q[1, 1] == pytest.approx(0.5j)
        assert q[1, 3] == pytest.approx(-0.5j)
        assert q[2, 2] == pytest.approx(0.5)
        assert check_unitary(qft(4))

    def test_qft_of_zero_is_uniform(self):
        np.testing.assert_allclose(qft(3) @ basis_state(3, '000').amplitudes, uniform_state(3).amplitudes, atol=1e-12)

    def test_diffusion_inverts_about_average(self):
        amps = np.array([1, 2, 3, 6], dtype=complex)
        np.testing.assert_allclose(diffusion(2) @ amps, 2 * amps.mean() - amps)
        assert check_unitary(diffusion(3))

    def test_phase_oracle(self):
        np.testing.assert_array_equal(np.diag(phase_oracle(2, '10')), [1, 1, -1, 1])

    def test_cached_gates_are_read_only(self):
        gate = qft(2)
        assert gate is qft(2)
        with pytest.raises(ValueError):
            gate[0, 0] = 0


class TestOracle:
    def test_is_permutation(self, balanced_table):
        u = oracle_from_truth_table(balanced_table)
        assert u.shape == (16, 16)
        assert check_unitary(u)
        np.testing.assert_array_equal(u.sum(axis=0), np.ones(16))

    def test_xor_action(self, balanced_table):
        """|x>|y> -> |x>|y ⊕ f(x)> with the input register high-order"""
        u = oracle_from_truth_table(balanced_table)
        # f(000) = 1: |000>|0> -> |000>|1>
        assert u[1, 0] == 1
        # f(001) = 0: |001>|1> stays
        assert u[3, 3] == 1

    def test_constant_zero_is_identity(self, constant_table):
        np.testing.assert_array_equal(oracle_from_truth_table(constant_table), identity(16))

    def test_constant_one_on_three_inputs(self):
        """f ≡ 1 acts as I ⊗ I ⊗ I ⊗ NOT"""
        u = oracle_from_truth_table(TruthTable.constant(3, 1))
        np.testing.assert_array_equal(u, np.kron(identity(8), NOT_GATE))

    def test_last_input_bit(self):
        """f(x) = x3 acts as I ⊗ I ⊗ CNOT"""
        u = oracle_from_truth_table(TruthTable.from_function(3, 1, lambda x: x & 1))
        cnot = np.block([[identity(2), np.zeros((2, 2))], [np.zeros((2, 2)), NOT_GATE]])
        np.testing.assert_array_equal(u, np.kron(identity(4), cnot))

    def test_period_two_block_structure(self, period2_table):
        """I_4 ⊗ diag(I_4, C ⊗ C) ⊗ C for the period-2 example"""
        c = NOT_GATE
        inner = np.block([[identity(4), np.zeros((4, 4))], [np.zeros((4, 4)), np.kron(c, c)]])
        expected = np.kron(np.kron(identity(4), inner), c)
        np.testing.assert_array_equal(oracle_from_truth_table(period2_table), expected)


class TestPlans:
    def test_deutsch_jozsa_plan_is_unitary(self, balanced_table):
        plan = deutsch_jozsa_plan(balanced_table)
        assert plan.order == 16
        assert check_unitary(compose_qag(plan))

    def test_deutsch_jozsa_plan_arity(self, period2_table):
        with pytest.raises(ArityError):
            deutsch_jozsa_plan(period2_table)

    def test_shor_plan_arity(self, balanced_table):
        with pytest.raises(ArityError):
            shor_plan(balanced_table)

    def test_mismatched_stages(self):
        with pytest.raises(DimensionError):
            GatePlan(identity_gate(1), identity_gate(2), identity_gate(1))

    def test_non_unitary_stage(self):
        with pytest.raises(ValidationError):
            GatePlan(np.ones((2, 2)), identity_gate(1), identity_gate(1))

    def test_grover_iteration_shapes(self):
        oracle, interference = grover_iteration(3, '001')
        assert oracle.shape == interference.shape == (16, 16)
        assert check_unitary(interference)

    def test_single_search_iteration(self):
        """One full search gate lifts the marked item to 25/32"""
        final = compose_qag(grover_plan(3, '001')) @ basis_state(4, '0001').amplitudes
        probs = np.abs(final.reshape(8, 2)) ** 2
        assert probs.sum(axis=1)[1] == pytest.approx(25 / 32)


class TestGateCache:
    def test_eviction_is_fifo(self):
        cache = GateCache(max_entries=2)
        for key in ('a', 'b', 'c'):
            cache.set(key, np.eye(2))
        assert cache.get('a') is None
        assert cache.get('c') is not None
        assert cache.hits == 1 and cache.misses == 1

    def test_zero_size_disables_caching(self):
        cache = GateCache(max_entries=0)
        stored = cache.set('a', np.eye(2))
        assert not stored.flags.writeable
        assert cache.get('a') is None

    def test_get_or_build_builds_once(self):
        cache = GateCache(max_entries=4)
        calls = []

        def build():
            calls.append(1)
            return np.eye(2)

        cache.get_or_build('k', build)
        cache.get_or_build('k', build)
        assert len(calls) == 1
        assert cache.invalidate('k')
        assert not cache.invalidate('k')

    def test_singleton(self):
        assert get_cache() is get_cache()

    def test_singleton_sized_from_environment(self, monkeypatch):
        monkeypatch.setenv('QA_GATE_CACHE_SIZE', '0')
        assert get_cache().max_entries == 0

    def test_reset_drops_singleton(self):
        first = get_cache()
        reset_cache()
        assert get_cache() is not first
