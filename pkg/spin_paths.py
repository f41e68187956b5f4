# -*- coding: utf-8 -*-
"""
Angular-momentum addition paths and the labelled basis |J1, ..., Jn, m>.

A path (J1, ..., Jn) starts at J1 = 1/2 and moves by +-1/2 at every added
qubit.  Its prefix (J1, ..., J_{n-1}) is the degeneracy index lambda, Jn the
irrep label.  Basis vectors are built by coupling one spin-1/2 at a time with
Condon-Shortley coefficients; x and y bases are the z basis rotated by a
global spin rotation.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh, expm
from scipy.special import comb

from helpers import (
    InvalidArgumentError,
    NumericalError,
    RESIDUAL_TOL,
    ROUNDING_TOL,
    HalfInteger,
    as_half_integer,
    format_spin,
    frozen,
)
from spin_operators import (
    SPIN_HALF,
    Axis,
    check_qubit_count,
    partial_collective_spin,
    total_spin_squared,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
SPIN_UP = frozen([1.0, 0.0])     # |0>, m = +1/2
SPIN_DOWN = frozen([0.0, 1.0])   # |1>, m = -1/2


@dataclass(frozen=True, order=True)
class SpinPath:
    steps: Tuple[Fraction, ...]

    def __post_init__(self):
        steps = tuple(as_half_integer(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise InvalidArgumentError("a spin path needs at least one step")
        if steps[0] != HALF:
            raise InvalidArgumentError(f"a spin path starts at J1 = 1/2, got {steps[0]}")
        for prev, cur in zip(steps, steps[1:]):
            if cur < 0 or abs(cur - prev) != HALF:
                raise InvalidArgumentError(f"invalid step {prev} -> {cur} in path {self.label}")

    @classmethod
    def of(cls, *steps: HalfInteger) -> "SpinPath":
        return cls(tuple(steps))

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def j(self) -> Fraction:
        """Final total spin Jn."""
        return self.steps[-1]

    @property
    def degeneracy_index(self) -> Tuple[Fraction, ...]:
        return self.steps[:-1]

    @property
    def o_value(self) -> Fraction:
        """Eigenvalue of O_n: +(J_{n-1} + 1/2) for an up step, minus that otherwise."""
        if self.n < 2:
            raise InvalidArgumentError("O_n is defined only for n > 1")
        magnitude = self.steps[-2] + HALF
        return magnitude if self.steps[-1] > self.steps[-2] else -magnitude

    @property
    def label(self) -> str:
        return " ".join(format_spin(s) for s in self.steps)


@dataclass(frozen=True)
class IrrepRow:
    j: Fraction
    multiplicity: int
    dimension: int


@dataclass(frozen=True)
class IrrepTable:
    n: int
    rows: Tuple[IrrepRow, ...]

    def multiplicity(self, j: HalfInteger) -> int:
        j = as_half_integer(j)
        return next((row.multiplicity for row in self.rows if row.j == j), 0)

    @property
    def total_dimension(self) -> int:
        return sum(row.multiplicity * row.dimension for row in self.rows)


@dataclass(frozen=True, eq=False)
class LabeledState:
    path: SpinPath
    m: Fraction
    axis: Axis
    vector: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.path.n

    @property
    def j(self) -> Fraction:
        return self.path.j

    @property
    def degeneracy_index(self) -> Tuple[Fraction, ...]:
        return self.path.degeneracy_index

    @property
    def labels(self) -> str:
        return f"|{self.path.label}; m_{self.axis.value}={format_spin(self.m)}>"

    def residual(self) -> float:
        """Largest eigen-equation residual over (S^(k))^2 and S_axis^(n)."""
        v = self.vector
        worst = abs(np.linalg.norm(v) - 1.0)
        for k, jk in enumerate(self.path.steps, start=1):
            casimir = float(jk * (jk + 1))
            worst = max(worst, float(np.max(np.abs(total_spin_squared(k, self.n) @ v - casimir * v))))
        s_axis = partial_collective_spin(self.axis, self.n, self.n)
        worst = max(worst, float(np.max(np.abs(s_axis @ v - float(self.m) * v))))
        return worst


def _spin_range(n: int) -> List[Fraction]:
    """Allowed total spins for n qubits, ascending."""
    top = Fraction(n, 2)
    return [top - k for k in range(n // 2, -1, -1)]


def _parity_ok(n: int, j: Fraction) -> bool:
    return (Fraction(n, 2) - j).denominator == 1 and 0 <= j <= Fraction(n, 2)


def enumerate_paths(n: int, j: HalfInteger) -> List[SpinPath]:
    """All addition paths of n spin-1/2 ending at Jn = j, lexicographically ordered."""
    n = check_qubit_count(n)
    j = as_half_integer(j)
    if not _parity_ok(n, j):
        logger.warning(f"No paths for n={n}, J={j}: J must be in 0..n/2 with J = n/2 mod 1")
        return []

    found: List[SpinPath] = []

    def walk(steps: List[Fraction]) -> None:
        remaining = n - len(steps)
        if remaining == 0:
            if steps[-1] == j:
                found.append(SpinPath(tuple(steps)))
            return
        if abs(steps[-1] - j) > Fraction(remaining, 2):
            return
        for nxt in (steps[-1] - HALF, steps[-1] + HALF):
            if nxt >= 0:
                walk(steps + [nxt])

    walk([HALF])
    return sorted(found)


@lru_cache(maxsize=None)
def count_paths(n: int, j: Fraction) -> int:
    """Number of paths of length n ending at j (branching-diagram count)."""
    if n == 1:
        return 1 if j == HALF else 0
    if j < 0:
        return 0
    return count_paths(n - 1, j - HALF) + count_paths(n - 1, j + HALF)


def irrep_multiplicity(n: int, j: HalfInteger) -> int:
    """Closed-form n_J = C(n, n/2-J) - C(n, n/2-J-1) (Catalan triangle)."""
    j = as_half_integer(j)
    if not _parity_ok(n, j):
        return 0
    k = int(Fraction(n, 2) - j)
    return int(comb(n, k, exact=True) - (comb(n, k - 1, exact=True) if k >= 1 else 0))


def irrep_multiplicity_from_spectrum(n: int, j: HalfInteger) -> int:
    """n_J read off the eigenvalue multiplicity of (S^(n))^2."""
    j = as_half_integer(j)
    values = eigh(total_spin_squared(n, n), eigvals_only=True)
    hits = int(np.sum(np.abs(values - float(j * (j + 1))) < ROUNDING_TOL))
    return hits // int(2 * j + 1)


def zero_spin_multiplicity(n: int) -> int:
    """Number of J_n = 0 states, counted from the spectrum of (S^(n))^2."""
    n = check_qubit_count(n)
    if n % 2:
        return 0
    return irrep_multiplicity_from_spectrum(n, 0)


def irrep_table(n: int) -> IrrepTable:
    n = check_qubit_count(n)
    rows = tuple(
        IrrepRow(j, count_paths(n, j), int(2 * j + 1))
        for j in _spin_range(n)
    )
    table = IrrepTable(n, rows)
    if table.total_dimension != 2 ** n:
        raise NumericalError(f"irrep dimensions sum to {table.total_dimension}, expected {2 ** n}")
    return table


@lru_cache(maxsize=None)
def _coupled_vector(steps: Tuple[Fraction, ...], m: Fraction) -> np.ndarray:
    if len(steps) == 1:
        return frozen(SPIN_UP if m == HALF else SPIN_DOWN)
    j_prev, j = steps[-2], steps[-1]
    denom = float(2 * j_prev + 1)
    if j > j_prev:
        c_up = np.sqrt(float(j_prev + m + HALF) / denom)
        c_down = np.sqrt(float(j_prev - m + HALF) / denom)
    else:
        c_up = -np.sqrt(float(j_prev - m + HALF) / denom)
        c_down = np.sqrt(float(j_prev + m + HALF) / denom)

    vec = np.zeros(2 ** len(steps), dtype=complex)
    if abs(m - HALF) <= j_prev:
        vec += c_up * np.kron(_coupled_vector(steps[:-1], m - HALF), SPIN_UP)
    if abs(m + HALF) <= j_prev:
        vec += c_down * np.kron(_coupled_vector(steps[:-1], m + HALF), SPIN_DOWN)
    return frozen(vec)


@lru_cache(maxsize=None)
def axis_rotation(axis: Axis, n: int) -> np.ndarray:
    """Global rotation U with U^dag S_axis U = S_z, as a product of one-qubit rotations."""
    if axis is Axis.Z:
        single = np.eye(2, dtype=complex)
    elif axis is Axis.X:
        single = expm(-0.5j * np.pi * SPIN_HALF[1])
    else:
        single = expm(0.5j * np.pi * SPIN_HALF[0])
    return frozen(reduce(np.kron, [single] * n))


def _make_state(path: SpinPath, m: Fraction, axis: Axis) -> LabeledState:
    vector = _coupled_vector(path.steps, m)
    if axis is not Axis.Z:
        vector = frozen(axis_rotation(axis, path.n) @ vector)
    return LabeledState(path, m, axis, vector)


def build_basis_state(path: SpinPath, m: HalfInteger, axis=Axis.Z) -> LabeledState:
    if not isinstance(path, SpinPath):
        path = SpinPath(tuple(path))
    check_qubit_count(path.n)
    m = as_half_integer(m)
    axis = Axis.parse(axis)
    if abs(m) > path.j or (path.j - m).denominator != 1:
        raise InvalidArgumentError(f"m={m} is not a projection of J={path.j}")
    state = _make_state(path, m, axis)
    residual = state.residual()
    if residual > RESIDUAL_TOL:
        logger.error(f"State {state.labels} fails its eigen-equations (residual {residual:.3e})")
        raise NumericalError(f"basis state {state.labels} has residual {residual:.3e}")
    return state


def projections(j: Fraction) -> List[Fraction]:
    """m = j, j-1, ..., -j."""
    return [j - k for k in range(int(2 * j) + 1)]


def basis_matrix(states: Sequence[LabeledState]) -> np.ndarray:
    """Stack state vectors as columns."""
    return np.column_stack([s.vector for s in states])


@lru_cache(maxsize=None)
def _full_basis(n: int, axis: Axis) -> Tuple[LabeledState, ...]:
    states = []
    for row in irrep_table(n).rows:
        for path in enumerate_paths(n, row.j):
            for m in projections(row.j):
                states.append(_make_state(path, m, axis))
    logger.debug(f"Built labelled basis for n={n}, axis={axis.value}: {len(states)} states")
    _verify_basis(states, n, axis)
    return tuple(states)


def _verify_basis(states: Sequence[LabeledState], n: int, axis: Axis) -> None:
    basis = basis_matrix(states)
    worst = float(np.max(np.abs(basis.conj().T @ basis - np.eye(2 ** n))))
    for k in range(1, n + 1):
        casimirs = np.array([float(s.path.steps[k - 1] * (s.path.steps[k - 1] + 1)) for s in states])
        worst = max(worst, float(np.max(np.abs(total_spin_squared(k, n) @ basis - basis * casimirs))))
    ms = np.array([float(s.m) for s in states])
    worst = max(worst, float(np.max(np.abs(partial_collective_spin(axis, n, n) @ basis - basis * ms))))
    if worst > RESIDUAL_TOL:
        logger.error(f"Labelled basis n={n}, axis={axis.value} fails verification ({worst:.3e})")
        raise NumericalError(f"labelled basis residual {worst:.3e} exceeds {RESIDUAL_TOL}")


def full_labeled_basis(n: int, axis=Axis.Z) -> List[LabeledState]:
    """All 2^n labelled states: J ascending, paths lexicographic, m descending."""
    n = check_qubit_count(n)
    return list(_full_basis(n, Axis.parse(axis)))
