import math
import unittest

import numpy as np

from encoded_logic import (
    EncodedGateSpec,
    axis_states,
    bloch_vector,
    decode,
    encode,
    gate_fidelity,
    gate_under_noise,
    generated_algebra_dimension,
    h8_ground_space,
    logical_basis,
    optimal_delta,
    optimal_delta_numeric,
    projected_generator,
)
from helpers import InvalidArgumentError, commutator
from open_system import build_model, evolve
from spin_operators import SystemSpec, collective_hamiltonian, exchange_operator

SPEC = SystemSpec(4, 1.0)
SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)
R = 1.0 / math.sqrt(2.0)


class TestEncoding(unittest.TestCase):
    def test_logical_basis(self):
        zero, one = logical_basis()
        np.testing.assert_allclose(zero.vector, np.kron(SINGLET, SINGLET), atol=1e-12)
        self.assertAlmostEqual(abs(np.vdot(zero.vector, one.vector)), 0.0, places=12)
        h0 = collective_hamiltonian(SPEC)
        for state in (zero, one):
            self.assertLess(np.max(np.abs(h0 @ state.vector)), 1e-12)

    def test_round_trip(self):
        state = encode(1, 0)
        logical, leakage = decode(np.outer(state.vector, state.vector.conj()))
        np.testing.assert_allclose(logical, np.diag([1.0, 0.0]), atol=1e-12)
        self.assertAlmostEqual(leakage, 0.0, places=12)

    def test_axis_states_round_trip(self):
        for label, amplitudes in axis_states():
            state = encode(*amplitudes)
            logical, _ = decode(np.outer(state.vector, state.vector.conj()))
            fidelity = np.real(np.vdot(amplitudes, logical @ amplitudes))
            self.assertAlmostEqual(fidelity, 1.0, places=12, msg=label)

    def test_maximally_mixed_state(self):
        logical, leakage = decode(np.eye(16) / 16.0)
        np.testing.assert_allclose(logical, np.eye(2) / 2.0, atol=1e-12)
        self.assertAlmostEqual(leakage, 7.0 / 8.0, places=12)

    def test_decode_without_ground_population(self):
        excited = np.zeros((16, 16))
        excited[0, 0] = 1.0   # |0000> has J = 2
        with self.assertLogs("encoded_logic", level="WARNING"):
            logical, leakage = decode(excited)
        np.testing.assert_allclose(logical, np.eye(2) / 2.0)
        self.assertAlmostEqual(leakage, 1.0, places=12)

    def test_invalid_inputs(self):
        with self.assertRaises(InvalidArgumentError):
            encode(1, 1)
        with self.assertRaises(InvalidArgumentError):
            decode(np.eye(16))
        with self.assertRaises(InvalidArgumentError):
            decode(np.eye(4) / 4.0)

    def test_bloch_vector(self):
        np.testing.assert_allclose(bloch_vector(np.array([[0.5, 0.5], [0.5, 0.5]])), [1.0, 0.0, 0.0])
        np.testing.assert_allclose(bloch_vector(np.diag([0.0, 1.0])), [0.0, 0.0, -1.0])


class TestEncodedGenerators(unittest.TestCase):
    def test_first_pair_is_diagonal(self):
        np.testing.assert_allclose(projected_generator((1, 2)), np.diag([-1.0, 1.0]), atol=1e-12)

    def test_superposition_has_zero_exchange_expectation(self):
        state = encode(R, R)
        value = np.vdot(state.vector, exchange_operator(1, 2, 4) @ state.vector)
        self.assertAlmostEqual(abs(value), 0.0, places=12)

    def test_generators_do_not_commute(self):
        g12, g23 = projected_generator((1, 2)), projected_generator((2, 3))
        self.assertGreater(np.max(np.abs(commutator(g12, g23))), 0.1)

    def test_algebra_dimension(self):
        self.assertEqual(generated_algebra_dimension([(1, 2), (2, 3)]), 3)
        self.assertEqual(generated_algebra_dimension([(1, 2)]), 1)
        self.assertEqual(generated_algebra_dimension([(1, 2), (3, 4)]), 1)

    def test_pair_validation(self):
        with self.assertRaises(InvalidArgumentError):
            projected_generator((2, 1))
        with self.assertRaises(InvalidArgumentError):
            projected_generator((1, 5))


class TestGateFidelity(unittest.TestCase):
    def test_numeric_optimum(self):
        for beta in (1.0, 2.0, 5.0):
            numeric, value = optimal_delta_numeric(beta, 1.0, 1e-3)
            self.assertLessEqual(abs(numeric - 1.0 / beta), 1e-3 + 1e-12, msg=f"beta={beta}")
            self.assertAlmostEqual(optimal_delta(beta), 1.0 / beta)
            analytic = math.exp(beta - 1.0) / beta
            self.assertAlmostEqual(gate_fidelity(optimal_delta(beta), 1.0, beta), analytic, places=9)
            self.assertLessEqual(value, analytic * (1 + 1e-12))

    def test_vanishes_for_small_delta(self):
        self.assertLess(gate_fidelity(1e-12, 1.0, 1.0), 1e-11)

    def test_out_of_regime_warns(self):
        with self.assertLogs("encoded_logic", level="WARNING"):
            gate_fidelity(2.0, 1.0, 1.0)
        with self.assertRaises(InvalidArgumentError):
            gate_fidelity(-0.1, 1.0, 1.0)


class TestGates(unittest.TestCase):
    def test_spec_validation(self):
        with self.assertRaises(InvalidArgumentError):
            EncodedGateSpec({(2, 1): 0.1}, 1.0)
        with self.assertRaises(InvalidArgumentError):
            EncodedGateSpec({(1, 2): 0.1}, -1.0)
        spec = EncodedGateSpec({(1, 2): 0.5}, 1.0)
        with self.assertLogs("encoded_logic", level="WARNING"):
            self.assertEqual(len(spec.regime_warnings(1.0)), 1)

    def test_closed_system_gate(self):
        model = build_model(SPEC, math.inf, 0.0, gamma0=0.0)
        spec = EncodedGateSpec({(1, 2): 0.05, (2, 3): 0.03}, 20.0)
        result = gate_under_noise(spec, model)
        self.assertLess(result.unitary_error, 1e-6)
        self.assertGreater(result.fidelity, 1.0 - 1e-6)
        self.assertLess(result.leakage, 1e-10)

    def test_zero_coupling_is_identity(self):
        model = build_model(SPEC, math.inf, 0.0, gamma0=0.0)
        result = gate_under_noise(EncodedGateSpec({(1, 2): 0.0}, 10.0), model)
        np.testing.assert_allclose(result.transfer, np.eye(3), atol=1e-9)
        self.assertLess(result.unitary_error, 1e-9)

    def test_colder_bath_gives_better_gate(self):
        spec = EncodedGateSpec({(1, 2): 0.05}, 10.0)
        warm = gate_under_noise(spec, build_model(SPEC, 2.0, 0.1))
        cold = gate_under_noise(spec, build_model(SPEC, 4.0, 0.1))
        self.assertGreater(cold.fidelity, warm.fidelity)
        self.assertLess(cold.leakage, warm.leakage)

    def test_closed_gate_keeps_sector_populations(self):
        model = build_model(SPEC, math.inf, 0.0, gamma0=0.0)
        spec = EncodedGateSpec({(1, 3): 0.1}, 5.0)
        rho0 = np.zeros((16, 16))
        rho0[5, 5] = 1.0   # |0101> spreads over all three sectors
        hamiltonian = model.hamiltonian + spec.physical_coupling()
        trajectory = evolve(model, rho0, spec.duration, hamiltonian=hamiltonian)
        for key in ("population_j0", "population_j1", "population_j2"):
            values = trajectory.observables[key]
            self.assertLess(max(values) - min(values), 1e-10, msg=key)


class TestEightQubits(unittest.TestCase):
    def test_ground_space(self):
        report = h8_ground_space()
        self.assertEqual(report.dimension, 14)
        self.assertLess(report.product_residual, 1e-10)
        self.assertLess(report.exchange_leakage, 1e-10)
        self.assertTrue(report.passed)


if __name__ == "__main__":
    unittest.main()
