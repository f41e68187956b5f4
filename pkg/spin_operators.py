# -*- coding: utf-8 -*-
"""
Collective spin operators of n qubits as dense complex matrices.

Conventions: s = sigma/2 (hbar = 1), computational basis with |0> = spin up
along z, qubit 1 is the leftmost (most significant) tensor factor.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from typing import List, Tuple

import numpy as np
from scipy.linalg import eigh

from config import MAX_QUBITS
from helpers import (
    InvalidArgumentError,
    frozen,
    spin_from_casimir,
)

logger = logging.getLogger(__name__)


class Axis(Enum):
    """Spin axis; declaration order x -> y -> z fixes the Levi-Civita sign."""
    X = "x"
    Y = "y"
    Z = "z"

    @classmethod
    def parse(cls, value) -> "Axis":
        if isinstance(value, Axis):
            return value
        try:
            return cls(str(value).lower())
        except ValueError as e:
            raise InvalidArgumentError(f"unknown axis {value!r}; expected x, y or z") from e

    @property
    def index(self) -> int:
        return list(Axis).index(self)


class HamiltonianForm(Enum):
    SPIN_SQUARED = "spin-squared"
    PAIRWISE_HEISENBERG = "pairwise-heisenberg"


# Spin-1/2 matrices, same layout as the usual PAULI tables (x, y, z)
SPIN_HALF = 0.5 * np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
)
IDENTITY_2 = np.eye(2, dtype=complex)


def levi_civita(a: Axis, b: Axis, c: Axis) -> int:
    i, j, k = a.index, b.index, c.index
    return int(np.sign((j - i) * (k - i) * (k - j)))


@dataclass(frozen=True)
class SystemSpec:
    """n qubits with exchange scale Delta (energy units, hbar = k_B = 1)."""
    n: int
    delta: float = 1.0

    def __post_init__(self):
        check_qubit_count(self.n)
        if not np.isfinite(self.delta) or self.delta <= 0:
            raise InvalidArgumentError(f"Delta must be a positive energy, got {self.delta}")

    @property
    def dim(self) -> int:
        return 2 ** self.n


def check_qubit_count(n: int, limit: int = MAX_QUBITS) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidArgumentError(f"qubit count must be an integer, got {n!r}")
    if not 1 <= n <= limit:
        raise InvalidArgumentError(f"qubit count must be in 1..{limit}, got {n}")
    return int(n)


def _check_index(name: str, value: int, n: int) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or not 1 <= value <= n:
        raise InvalidArgumentError(f"{name} must be in 1..{n}, got {value!r}")


@lru_cache(maxsize=None)
def _single_spin(axis: Axis, i: int, n: int) -> np.ndarray:
    factors = [IDENTITY_2] * n
    factors[i - 1] = SPIN_HALF[axis.index]
    return frozen(reduce(np.kron, factors))


def single_spin_operator(axis, i: int, n: int) -> np.ndarray:
    """s_axis^(i): half a Pauli matrix on qubit i, identity elsewhere."""
    n = check_qubit_count(n)
    _check_index("qubit index", i, n)
    return _single_spin(Axis.parse(axis), int(i), n)


@lru_cache(maxsize=None)
def _partial_spin(axis: Axis, k: int, n: int) -> np.ndarray:
    return frozen(sum(_single_spin(axis, i, n) for i in range(1, k + 1)))


def partial_collective_spin(axis, k: int, n: int) -> np.ndarray:
    """S_axis^(k) = sum of s_axis^(i) over the first k qubits."""
    n = check_qubit_count(n)
    _check_index("k", k, n)
    return _partial_spin(Axis.parse(axis), int(k), n)


@lru_cache(maxsize=None)
def _spin_squared(k: int, n: int) -> np.ndarray:
    logger.debug(f"Building (S^({k}))^2 on {n} qubits (dim {2 ** n})")
    total = sum(_partial_spin(a, k, n) @ _partial_spin(a, k, n) for a in Axis)
    return frozen(total)


def total_spin_squared(k: int, n: int) -> np.ndarray:
    """(S^(k))^2, eigenvalues J(J+1) with J in {0, 1/2, ..., k/2}."""
    n = check_qubit_count(n)
    _check_index("k", k, n)
    return _spin_squared(int(k), n)


def _heisenberg_pair(i: int, j: int, n: int) -> np.ndarray:
    return sum(_single_spin(a, i, n) @ _single_spin(a, j, n) for a in Axis)


@lru_cache(maxsize=None)
def _exchange(i: int, j: int, n: int) -> np.ndarray:
    return frozen(0.5 * np.eye(2 ** n) + 2.0 * _heisenberg_pair(i, j, n))


def exchange_operator(i: int, j: int, n: int) -> np.ndarray:
    """E_ij = I/2 + 2 s^(i).s^(j), the swap of qubits i and j."""
    n = check_qubit_count(n)
    _check_index("i", i, n)
    _check_index("j", j, n)
    if not i < j:
        raise InvalidArgumentError(f"exchange needs i < j, got i={i}, j={j}")
    return _exchange(int(i), int(j), n)


def exchange_pairs(n: int) -> List[Tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


@lru_cache(maxsize=None)
def _hamiltonian(n: int, delta: float, form: HamiltonianForm) -> np.ndarray:
    if form is HamiltonianForm.SPIN_SQUARED:
        return frozen(0.5 * delta * _spin_squared(n, n))
    # sum over i != j counts every unordered pair twice
    pairs = sum((_heisenberg_pair(i, j, n) for i, j in exchange_pairs(n)), np.zeros((2 ** n, 2 ** n)))
    return frozen(0.5 * delta * (2.0 * pairs + 0.75 * n * np.eye(2 ** n)))


def collective_hamiltonian(spec: SystemSpec, form=HamiltonianForm.SPIN_SQUARED) -> np.ndarray:
    """H0 = (Delta/2)(S^(n))^2, or the same built from pairwise Heisenberg terms."""
    return _hamiltonian(spec.n, float(spec.delta), parse_form(form))


def parse_form(form) -> HamiltonianForm:
    if isinstance(form, HamiltonianForm):
        return form
    try:
        return HamiltonianForm(str(form))
    except ValueError as e:
        choices = ", ".join(f.value for f in HamiltonianForm)
        raise InvalidArgumentError(f"unknown Hamiltonian form {form!r}; expected one of {choices}") from e


@lru_cache(maxsize=None)
def _o_operator(n: int) -> np.ndarray:
    return frozen(-0.25 * np.eye(2 ** n) + _spin_squared(n, n) - _spin_squared(n - 1, n))


def o_n_operator(n: int) -> np.ndarray:
    """O_n = -I/4 + (S^(n))^2 - (S^(n-1))^2; eigenvalues +-(J_{n-1} + 1/2)."""
    n = check_qubit_count(n)
    if n <= 1:
        raise InvalidArgumentError("O_n is defined only for n > 1")
    return _o_operator(n)


@dataclass(frozen=True)
class SpectrumLevel:
    j: Fraction
    energy: float
    multiplicity: int


def spectrum(spec: SystemSpec, form=HamiltonianForm.SPIN_SQUARED) -> List[SpectrumLevel]:
    """Distinct levels of H0, ascending, labelled by the total spin J."""
    energies = eigh(collective_hamiltonian(spec, form), eigvals_only=True)
    logger.debug(f"Diagonalized H0 for n={spec.n}: {len(energies)} eigenvalues")
    levels: List[SpectrumLevel] = []
    for energy in energies:
        j = spin_from_casimir(2.0 * energy / spec.delta)
        if levels and levels[-1].j == j:
            last = levels[-1]
            levels[-1] = SpectrumLevel(j, last.energy, last.multiplicity + 1)
            continue
        levels.append(SpectrumLevel(j, float(energy), 1))
    # snap energies to their exact values for clean output
    return [
        SpectrumLevel(lv.j, 0.5 * spec.delta * float(lv.j * (lv.j + 1)), lv.multiplicity)
        for lv in levels
    ]
