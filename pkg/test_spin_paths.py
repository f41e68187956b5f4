import unittest
from fractions import Fraction

import numpy as np

from helpers import InvalidArgumentError, commutator
from spin_operators import Axis, total_spin_squared
from spin_paths import (
    SPIN_UP,
    SpinPath,
    basis_matrix,
    build_basis_state,
    count_paths,
    enumerate_paths,
    full_labeled_basis,
    irrep_multiplicity,
    irrep_table,
    zero_spin_multiplicity,
)

HALF = Fraction(1, 2)
SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)


class TestSpinPaths(unittest.TestCase):
    def test_zero_spin_path_counts(self):
        for n, expected in ((4, 2), (6, 5), (8, 14)):
            self.assertEqual(len(enumerate_paths(n, 0)), expected)
            self.assertEqual(irrep_multiplicity(n, 0), expected)
            self.assertEqual(count_paths(n, Fraction(0)), expected)

    def test_spectral_oracle(self):
        self.assertEqual(zero_spin_multiplicity(4), 2)
        self.assertEqual(zero_spin_multiplicity(8), 14)
        self.assertEqual(zero_spin_multiplicity(5), 0)

    def test_four_qubit_paths_in_lexicographic_order(self):
        paths = enumerate_paths(4, 0)
        self.assertEqual([p.label for p in paths], ["1/2 0 1/2 0", "1/2 1 1/2 0"])
        self.assertEqual(paths, sorted(paths))

    def test_catalan_triangle_agrees_with_enumeration(self):
        for n in range(1, 9):
            for row in irrep_table(n).rows:
                self.assertEqual(irrep_multiplicity(n, row.j), len(enumerate_paths(n, row.j)))

    def test_irrep_table_dimensions(self):
        table = irrep_table(4)
        self.assertEqual(table.total_dimension, 16)
        self.assertEqual([(r.j, r.multiplicity) for r in table.rows],
                         [(Fraction(0), 2), (Fraction(1), 3), (Fraction(2), 1)])
        self.assertEqual(table.multiplicity("3/2"), 0)

    def test_wrong_parity_gives_no_paths(self):
        with self.assertLogs("spin_paths", level="WARNING"):
            self.assertEqual(enumerate_paths(4, HALF), [])
        self.assertEqual(irrep_multiplicity(4, HALF), 0)

    def test_path_validation(self):
        with self.assertRaises(InvalidArgumentError):
            SpinPath.of(1, HALF)
        with self.assertRaises(InvalidArgumentError):
            SpinPath.of(HALF, 2)
        with self.assertRaises(InvalidArgumentError):
            SpinPath.of(HALF, "1/3")

    def test_o_value(self):
        self.assertEqual(SpinPath.of(HALF, 1).o_value, 1)
        self.assertEqual(SpinPath.of(HALF, 0, HALF, 0).o_value, -1)
        self.assertEqual(SpinPath.of(HALF, 1, "3/2").o_value, Fraction(3, 2))

    def test_singlet_product_state(self):
        state = build_basis_state(SpinPath.of(HALF, 0, HALF, 0), 0)
        np.testing.assert_allclose(state.vector, np.kron(SINGLET, SINGLET), atol=1e-12)

    def test_state_labels_and_residual(self):
        state = build_basis_state(("1/2", 1, "3/2"), "1/2", axis="x")
        self.assertEqual(state.j, Fraction(3, 2))
        self.assertEqual(state.degeneracy_index, (HALF, Fraction(1)))
        self.assertLess(state.residual(), 1e-10)
        self.assertIn("m_x=1/2", state.labels)

    def test_invalid_projection(self):
        with self.assertRaises(InvalidArgumentError):
            build_basis_state(SpinPath.of(HALF, 0), 1)
        with self.assertRaises(InvalidArgumentError):
            build_basis_state(SpinPath.of(HALF, 1), HALF)

    def test_full_basis_is_orthonormal_for_every_axis(self):
        for axis in Axis:
            states = full_labeled_basis(4, axis)
            self.assertEqual(len(states), 16)
            basis = basis_matrix(states)
            np.testing.assert_allclose(basis.conj().T @ basis, np.eye(16), atol=1e-12)
            self.assertLess(max(s.residual() for s in states), 1e-10)

    def test_single_qubit_vectors_are_read_only(self):
        up = build_basis_state(SpinPath.of(HALF), HALF)
        with self.assertRaises(ValueError):
            up.vector[0] = 0.0
        np.testing.assert_allclose(SPIN_UP, [1.0, 0.0])
        np.testing.assert_allclose(build_basis_state(SpinPath.of(HALF), -HALF).vector, [0.0, 1.0])

    def test_change_of_axis_keeps_partial_spins(self):
        z_basis = basis_matrix(full_labeled_basis(4, Axis.Z))
        for axis in (Axis.X, Axis.Y):
            change = basis_matrix(full_labeled_basis(4, axis)) @ z_basis.conj().T
            np.testing.assert_allclose(change.conj().T @ change, np.eye(16), atol=1e-12)
            for k in range(1, 5):
                casimir = total_spin_squared(k, 4)
                self.assertLess(np.max(np.abs(commutator(change, casimir))), 1e-12, msg=f"{axis.value}, k={k}")

    def test_basis_order(self):
        states = full_labeled_basis(3)
        self.assertEqual([s.j for s in states[:2]], [HALF, HALF])
        self.assertEqual([s.m for s in states[-4:]], [Fraction(3, 2), HALF, -HALF, Fraction(-3, 2)])


if __name__ == "__main__":
    unittest.main()
