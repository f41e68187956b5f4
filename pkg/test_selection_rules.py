import unittest

import numpy as np

from helpers import InvalidArgumentError
from selection_rules import (
    code_block,
    code_words,
    error_detection_check,
    exchange_block_check,
    exchange_conjugation_check,
    ground_block_leakage,
    is_detectable,
    matrix_element,
    o_sign_violation,
    selection_rule_scan,
    selection_suite,
    verify_eq1,
)
from spin_operators import Axis, single_spin_operator


class TestLastQubitIdentity(unittest.TestCase):
    def test_identity_holds_for_small_registers(self):
        for n in (2, 3, 4):
            for axis in Axis:
                self.assertLess(verify_eq1(n, axis), 1e-10, msg=f"n={n}, axis={axis.value}")

    def test_last_qubit_keeps_o_magnitude(self):
        for axis in Axis:
            self.assertLess(o_sign_violation(4, axis), 1e-12)

    def test_needs_two_qubits(self):
        with self.assertRaises(InvalidArgumentError):
            verify_eq1(1)


class TestSelectionRules(unittest.TestCase):
    def test_four_qubit_rules(self):
        for i in range(1, 5):
            for axis in Axis:
                report = selection_rule_scan(4, i, axis)
                self.assertTrue(report.passed, msg=f"s_{axis.value}({i}): {report.flags()}")
                self.assertLess(report.delta_j_violation, 1e-12)
                self.assertLess(report.ground_block_violation, 1e-12)

    def test_ground_block_connects_only_to_j1(self):
        report = selection_rule_scan(4, 2, Axis.X)
        ground_keys = [k for k in report.counts if "0" in k]
        self.assertTrue(ground_keys)
        for bra_j, ket_j in ground_keys:
            self.assertEqual({bra_j, ket_j}, {"0", "1"})

    def test_operator_along_basis_axis_keeps_m(self):
        for axis in Axis:
            self.assertEqual(selection_rule_scan(3, 1, axis).m_mixing_count, 0)

    def test_verbose_lists_every_element(self):
        report = selection_rule_scan(2, 1, Axis.Z, verbose=True)
        self.assertEqual(len(report.elements), 16)

    def test_scan_size_limit(self):
        with self.assertRaises(InvalidArgumentError):
            selection_rule_scan(9, 1)

    def test_matrix_element_checks_dimensions(self):
        words = code_words(4)
        value = matrix_element(words[0], single_spin_operator("z", 1, 4), words[1])
        self.assertAlmostEqual(abs(value), 0.0, places=12)
        with self.assertRaises(InvalidArgumentError):
            matrix_element(np.ones(4), single_spin_operator("z", 1, 4), words[1])


class TestErrorDetection(unittest.TestCase):
    def test_single_qubit_errors_are_detected(self):
        result = error_detection_check(4)
        self.assertTrue(result.passed)
        self.assertEqual(len(result.blocks), 12)
        self.assertLess(result.worst, 1e-12)
        self.assertLess(ground_block_leakage(4), 1e-12)

    def test_two_qubit_error_is_not_detectable(self):
        op = single_spin_operator("z", 1, 4) @ single_spin_operator("z", 2, 4)
        np.testing.assert_allclose(code_block(op), np.diag([-0.25, 1.0 / 12.0]), atol=1e-12)
        self.assertFalse(is_detectable(op))
        self.assertTrue(is_detectable(np.eye(16)))

    def test_only_four_qubits(self):
        with self.assertRaises(InvalidArgumentError):
            error_detection_check(6)


class TestExchange(unittest.TestCase):
    def test_conjugation_moves_last_qubit(self):
        for i in (1, 2, 3):
            for axis in Axis:
                self.assertLess(exchange_conjugation_check(i, 4, axis), 1e-12)

    def test_conjugation_rejects_last_index(self):
        with self.assertRaises(InvalidArgumentError):
            exchange_conjugation_check(4, 4)

    def test_exchanges_preserve_ground_block(self):
        check = exchange_block_check(4)
        self.assertTrue(check.passed)
        with self.assertRaises(InvalidArgumentError):
            exchange_block_check(3)


class TestSuite(unittest.TestCase):
    def test_all_checks_pass(self):
        rows = selection_suite(4)
        self.assertTrue(all(r["passed"] for r in rows))
        self.assertEqual({r["check"] for r in rows}, {
            "last_qubit_identity", "o_sign_rule", "delta_j_rule", "ground_block_rule",
            "ground_exit_rule", "exchange_conjugation", "error_detection", "exchange_block",
        })


if __name__ == "__main__":
    unittest.main()
