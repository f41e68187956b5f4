# -*- coding: utf-8 -*-
"""
Matrix elements of single-qubit operators in the labelled basis.

Checks the O_n identity for s_axis^(n), the Delta J_n selection rules with the
J_n = 0 exception, and the error-detecting property of the J_4 = 0 block.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from helpers import (
    EXACT_TOL,
    InvalidArgumentError,
    RESIDUAL_TOL,
    format_spin,
    max_abs,
    projector,
)
from spin_operators import (
    Axis,
    check_qubit_count,
    exchange_operator,
    exchange_pairs,
    single_spin_operator,
    total_spin_squared,
)
from spin_paths import LabeledState, basis_matrix, full_labeled_basis

logger = logging.getLogger(__name__)

MAX_SCAN_QUBITS = 8
CODE_QUBITS = 4

StateLike = Union[LabeledState, np.ndarray]


def _vector(state: StateLike) -> np.ndarray:
    return state.vector if isinstance(state, LabeledState) else np.asarray(state)


def matrix_element(bra: StateLike, op: np.ndarray, ket: StateLike) -> complex:
    """<bra|op|ket>."""
    left, right = _vector(bra), _vector(ket)
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or left.shape[0] != op.shape[0] or right.shape[0] != op.shape[1]:
        raise InvalidArgumentError(
            f"dimension mismatch: bra {left.shape}, operator {op.shape}, ket {right.shape}"
        )
    return complex(np.vdot(left, op @ right))


def _in_basis(op: np.ndarray, states: Sequence[LabeledState]) -> np.ndarray:
    basis = basis_matrix(states)
    return basis.conj().T @ op @ basis


def _check_scan_size(n: int, low: int = 1) -> int:
    n = check_qubit_count(n)
    if not low <= n <= MAX_SCAN_QUBITS:
        raise InvalidArgumentError(f"n must be in {low}..{MAX_SCAN_QUBITS} for a selection scan, got {n}")
    return n


def verify_eq1(n: int, axis=Axis.Z) -> float:
    """Max |(O'+O)<lam,O,m|s^(n)|lam',O',m'> - m d_lam d_O d_m| over all pairs."""
    n = _check_scan_size(n, low=2)
    axis = Axis.parse(axis)
    states = full_labeled_basis(n, axis)
    elements = _in_basis(single_spin_operator(axis, n, n), states)

    o_values = np.array([float(s.path.o_value) for s in states])
    ms = np.array([float(s.m) for s in states])
    same = np.array(
        [[a.degeneracy_index == b.degeneracy_index and a.path.o_value == b.path.o_value and a.m == b.m
          for b in states] for a in states]
    )
    lhs = (o_values[:, None] + o_values[None, :]) * elements
    rhs = np.where(same, ms[:, None], 0.0)
    residual = max_abs(lhs - rhs)
    logger.debug(f"Eq1 residual n={n}, axis={axis.value}: {residual:.3e}")
    return residual


def o_sign_violation(n: int, axis=Axis.Z) -> float:
    """Largest element of s_axis^(n) between states with |O'| != |O|."""
    n = _check_scan_size(n, low=2)
    axis = Axis.parse(axis)
    states = full_labeled_basis(n, axis)
    elements = _in_basis(single_spin_operator(axis, n, n), states)
    mags = np.array([abs(s.path.o_value) for s in states])
    off_shell = mags[:, None] != mags[None, :]
    return max_abs(np.where(off_shell, elements, 0.0))


@dataclass(frozen=True)
class MatrixElement:
    bra: str
    ket: str
    bra_j: Fraction
    ket_j: Fraction
    value: complex


@dataclass
class MatrixElementReport:
    n: int
    axis: Axis
    qubit: int
    elements: List[MatrixElement]
    counts: Dict[Tuple[str, str], int]
    delta_j_violation: float       # largest element with |Delta J_n| > 1
    ground_block_violation: float  # largest element between two J_n = 0 states
    ground_exit_violation: float   # largest element from J_n = 0 to J_n != 1
    m_mixing_count: int            # nonzero elements with m != m'
    threshold: float = EXACT_TOL
    verbose: bool = False

    @property
    def passed(self) -> bool:
        return max(self.delta_j_violation, self.ground_block_violation, self.ground_exit_violation) < self.threshold

    def flags(self) -> Dict[str, bool]:
        return {
            "delta_j_rule": self.delta_j_violation < self.threshold,
            "ground_block_rule": self.ground_block_violation < self.threshold,
            "ground_exit_rule": self.ground_exit_violation < self.threshold,
        }


def selection_rule_scan(n: int, i: int, axis=Axis.Z, verbose: bool = False,
                        threshold: float = EXACT_TOL) -> MatrixElementReport:
    """Classify every element of s_axis^(i) by the J_n labels of bra and ket."""
    n = _check_scan_size(n)
    axis = Axis.parse(axis)
    states = full_labeled_basis(n, axis)
    elements = _in_basis(single_spin_operator(axis, i, n), states)

    js = np.array([float(s.j) for s in states])
    jb, jk = js[:, None], js[None, :]
    magnitudes = np.abs(elements)
    delta_j = max_abs(np.where(np.abs(jb - jk) > 1.0, magnitudes, 0.0))
    ground_block = max_abs(np.where((jb == 0) & (jk == 0), magnitudes, 0.0))
    touches_ground = (jb == 0) | (jk == 0)
    other_side = np.where(jb == 0, jk, jb)
    ground_exit = max_abs(np.where(touches_ground & (other_side != 1.0), magnitudes, 0.0))

    listed: List[MatrixElement] = []
    counts: Counter = Counter()
    m_mixing = 0
    for a, bra in enumerate(states):
        for b, ket in enumerate(states):
            value = elements[a, b]
            nonzero = abs(value) >= threshold
            if nonzero:
                counts[(format_spin(bra.j), format_spin(ket.j))] += 1
                if bra.m != ket.m:
                    m_mixing += 1
            if nonzero or verbose:
                listed.append(MatrixElement(bra.labels, ket.labels, bra.j, ket.j, complex(value)))

    report = MatrixElementReport(
        n=n, axis=axis, qubit=i, elements=listed, counts=dict(counts),
        delta_j_violation=delta_j, ground_block_violation=ground_block,
        ground_exit_violation=ground_exit, m_mixing_count=m_mixing,
        threshold=threshold, verbose=verbose,
    )
    if not report.passed:
        logger.error(f"Selection rules fail for s_{axis.value}^({i}), n={n}: {report.flags()}")
    return report


@dataclass(frozen=True)
class ErrorDetectionResult:
    passed: bool
    worst: float
    blocks: Dict[Tuple[int, str], np.ndarray] = field(repr=False)


def code_words(n: int = CODE_QUBITS) -> List[LabeledState]:
    """The J_n = 0 states of the z basis, in lexicographic path order."""
    return [s for s in full_labeled_basis(n, Axis.Z) if s.j == 0]


def code_block(op: np.ndarray, n: int = CODE_QUBITS) -> np.ndarray:
    """Matrix <c_a|op|c_b> over the J_n = 0 code words."""
    return _in_basis(np.asarray(op), code_words(n))


def is_detectable(op: np.ndarray, n: int = CODE_QUBITS, tol: float = EXACT_TOL) -> bool:
    """Detection condition: the code block is a multiple of the identity."""
    block = code_block(op, n)
    scalar = np.trace(block) / block.shape[0]
    return max_abs(block - scalar * np.eye(block.shape[0])) < tol


def error_detection_check(n: int = CODE_QUBITS) -> ErrorDetectionResult:
    """Every s_alpha^(i) has an identically zero block on the code words."""
    if n != CODE_QUBITS:
        raise InvalidArgumentError(f"the error-detection check is defined for n = {CODE_QUBITS}")
    blocks = {}
    for i in range(1, n + 1):
        for axis in Axis:
            blocks[(i, axis.value)] = code_block(single_spin_operator(axis, i, n), n)
    worst = max(max_abs(b) for b in blocks.values())
    return ErrorDetectionResult(worst < EXACT_TOL, worst, blocks)


def ground_block_leakage(n: int = CODE_QUBITS) -> float:
    """Largest entry of P0 s_alpha^(i) P0 over all qubits and axes."""
    words = basis_matrix(code_words(n))
    p0 = projector(words)
    return max(
        max_abs(p0 @ single_spin_operator(axis, i, n) @ p0)
        for i in range(1, n + 1) for axis in Axis
    )


def exchange_conjugation_check(i: int, n: int, axis=Axis.Z) -> float:
    """Max |s^(i) - E_in s^(n) E_in|."""
    n = check_qubit_count(n)
    if i == n:
        raise InvalidArgumentError("exchange_conjugation_check needs i < n (i = n is the identity case)")
    if not 1 <= i < n:
        raise InvalidArgumentError(f"qubit index must be in 1..{n - 1}, got {i}")
    swap = exchange_operator(i, n, n)
    conjugated = swap @ single_spin_operator(axis, n, n) @ swap
    return max_abs(single_spin_operator(axis, i, n) - conjugated)


@dataclass(frozen=True)
class ExchangeBlockCheck:
    commutator: float   # max |[E_ij, (S^(n))^2]|
    unitarity: float    # max |B^dag B - I| for B = P0 E_ij P0 on the code block
    leakage: float      # max |(I - P0) E_ij P0|

    @property
    def passed(self) -> bool:
        return max(self.commutator, self.unitarity, self.leakage) < RESIDUAL_TOL


def exchange_block_check(n: int = CODE_QUBITS) -> ExchangeBlockCheck:
    """Exchanges keep J_n and act on the J_n = 0 block only through lambda."""
    if n % 2:
        raise InvalidArgumentError("the J_n = 0 block exists only for even n")
    n = _check_scan_size(n, low=2)
    casimir = total_spin_squared(n, n)
    words = basis_matrix(code_words(n))
    p0 = projector(words)
    identity = np.eye(2 ** n)
    comm = unit = leak = 0.0
    for i, j in exchange_pairs(n):
        swap = exchange_operator(i, j, n)
        comm = max(comm, max_abs(swap @ casimir - casimir @ swap))
        block = words.conj().T @ swap @ words
        unit = max(unit, max_abs(block.conj().T @ block - np.eye(block.shape[0])))
        leak = max(leak, max_abs((identity - p0) @ swap @ p0))
    return ExchangeBlockCheck(comm, unit, leak)


def selection_suite(n: int, axes: Optional[Sequence] = None, verbose: bool = False) -> List[Dict]:
    """Rows of (check, axis, qubit, residual, threshold, passed) used by the CLI."""
    n = _check_scan_size(n)
    axes = [Axis.parse(a) for a in (axes or list(Axis))]
    rows: List[Dict] = []

    def add(check: str, axis: str, qubit: int, residual: float, threshold: float) -> None:
        rows.append({
            "check": check, "axis": axis, "qubit": qubit,
            "residual": float(residual), "threshold": threshold,
            "passed": bool(residual < threshold),
        })

    for axis in axes:
        if n >= 2:
            add("last_qubit_identity", axis.value, n, verify_eq1(n, axis), RESIDUAL_TOL)
            add("o_sign_rule", axis.value, n, o_sign_violation(n, axis), EXACT_TOL)
        for i in range(1, n + 1):
            report = selection_rule_scan(n, i, axis, verbose=verbose)
            add("delta_j_rule", axis.value, i, report.delta_j_violation, EXACT_TOL)
            add("ground_block_rule", axis.value, i, report.ground_block_violation, EXACT_TOL)
            add("ground_exit_rule", axis.value, i, report.ground_exit_violation, EXACT_TOL)
            if i < n:
                add("exchange_conjugation", axis.value, i, exchange_conjugation_check(i, n, axis), EXACT_TOL)
    if n == CODE_QUBITS:
        detection = error_detection_check(n)
        add("error_detection", "all", 0, detection.worst, EXACT_TOL)
        exchange = exchange_block_check(n)
        add("exchange_block", "all", 0, max(exchange.commutator, exchange.unitarity, exchange.leakage), RESIDUAL_TOL)
    failed = [r for r in rows if not r["passed"]]
    if failed:
        logger.error(f"{len(failed)} selection checks failed for n={n}")
    else:
        logger.info(f"All {len(rows)} selection checks passed for n={n}")
    return rows
