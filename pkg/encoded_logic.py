# -*- coding: utf-8 -*-
"""
The logical qubit stored in the two-fold J_4 = 0 ground space.

Encoding and decoding, exchange gates projected on the code block, the
delta-versus-temperature gate fidelity tradeoff, gates under the bath model,
and the eight-qubit ground-space checks.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh, expm
from scipy.spatial.transform import Rotation

from helpers import (
    EXACT_TOL,
    InvalidArgumentError,
    RESIDUAL_TOL,
    ROUNDING_TOL,
    STATE_TOL,
    IntegrationError,
    max_abs,
    projector,
)
from open_system import LindbladModel, propagator, state_problem
from selection_rules import CODE_QUBITS, code_words
from spin_operators import SPIN_HALF, SystemSpec, collective_hamiltonian, exchange_operator, exchange_pairs
from spin_paths import LabeledState, basis_matrix

logger = logging.getLogger(__name__)

PAULI = 2.0 * SPIN_HALF
GROUND_QUBITS = 8
GROUND_DIMENSION = 14
WEAK_COUPLING_RATIO = 0.1
AXIS_LABELS = ("+x", "-x", "+y", "-y", "+z", "-z")

Pair = Tuple[int, int]


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def logical_basis() -> List[LabeledState]:
    """|0_L>, |1_L>: the two J_4 = 0 states in lexicographic path order."""
    return code_words(CODE_QUBITS)


def _words() -> np.ndarray:
    return basis_matrix(logical_basis())


@dataclass(frozen=True)
class LogicalState:
    a: complex
    b: complex
    vector: np.ndarray = field(repr=False)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.a, self.b])


def encode(a: complex, b: complex) -> LogicalState:
    a, b = complex(a), complex(b)
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > STATE_TOL:
        raise InvalidArgumentError(f"|a|^2 + |b|^2 must be 1, got {norm}")
    return LogicalState(a, b, _words() @ np.array([a, b]))


def decode(rho: np.ndarray) -> Tuple[np.ndarray, float]:
    """Normalized 2x2 logical density matrix and the leakage 1 - Tr(P0 rho)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2 ** CODE_QUBITS, 2 ** CODE_QUBITS):
        raise InvalidArgumentError(f"expected a 16x16 density matrix, got {rho.shape}")
    problem = state_problem(rho)
    if problem:
        raise InvalidArgumentError(f"cannot decode: {problem}")
    words = _words()
    block = words.conj().T @ rho @ words
    population = float(np.real(np.trace(block)))
    leakage = 1.0 - population
    if population <= EXACT_TOL:
        logger.warning("No population left in the code block; returning the maximally mixed logical state")
        return np.eye(2) / 2.0, leakage
    return block / population, leakage


def axis_states() -> List[Tuple[str, np.ndarray]]:
    """The six logical Bloch-sphere axis states, in AXIS_LABELS order."""
    r = 1.0 / math.sqrt(2.0)
    amplitudes = [
        (r, r), (r, -r),
        (r, 1j * r), (r, -1j * r),
        (1.0, 0.0), (0.0, 1.0),
    ]
    return [(label, np.array(amp, dtype=complex)) for label, amp in zip(AXIS_LABELS, amplitudes)]


def bloch_vector(rho2: np.ndarray) -> np.ndarray:
    return np.array([float(np.real(np.trace(rho2 @ p))) for p in PAULI])


# ---------------------------------------------------------------------------
# Exchange generators on the code block
# ---------------------------------------------------------------------------

def _check_pair(pair: Pair, n: int = CODE_QUBITS) -> Pair:
    try:
        i, j = (int(x) for x in pair)
    except (TypeError, ValueError) as e:
        raise InvalidArgumentError(f"a coupling pair is two qubit indices, got {pair!r}") from e
    if not 1 <= i < j <= n:
        raise InvalidArgumentError(f"pair must satisfy 1 <= i < j <= {n}, got {pair!r}")
    return i, j


def projected_generator(pair: Pair) -> np.ndarray:
    """P0 E_ij P0 in the logical basis."""
    i, j = _check_pair(pair)
    words = _words()
    swap = exchange_operator(i, j, CODE_QUBITS)
    image = swap @ words
    outside = image - words @ (words.conj().T @ image)
    if max_abs(outside) > EXACT_TOL:
        raise InvalidArgumentError(f"E_{i}{j} does not preserve the code block")
    return words.conj().T @ image


def _su2_coordinates(matrix: np.ndarray) -> np.ndarray:
    """Pauli coordinates of a traceless Hermitian 2x2 matrix."""
    return np.array([float(np.real(np.trace(matrix @ p))) / 2.0 for p in PAULI])


def generated_algebra_dimension(pairs: Iterable[Pair]) -> int:
    """Real dimension of the Lie algebra generated by traceless projected exchanges."""
    generators = []
    for pair in pairs:
        g = projected_generator(pair)
        generators.append(g - np.trace(g) / 2.0 * np.eye(2))
    span: List[np.ndarray] = []

    def rank_of(mats: Sequence[np.ndarray]) -> int:
        if not mats:
            return 0
        return int(np.linalg.matrix_rank(np.array([_su2_coordinates(m) for m in mats]), tol=RESIDUAL_TOL))

    frontier = [g for g in generators if max_abs(g) > EXACT_TOL]
    while frontier:
        added = []
        for m in frontier:
            if rank_of(span + [m]) > rank_of(span):
                span.append(m)
                added.append(m)
        # Hermitian commutator i[A, B] stays in the traceless Hermitian space
        frontier = [1j * (a @ b - b @ a) for a in span for b in added]
        frontier = [m for m in frontier if max_abs(m) > EXACT_TOL]
        if not added:
            break
    return rank_of(span)


# ---------------------------------------------------------------------------
# Gate fidelity tradeoff
# ---------------------------------------------------------------------------

def _check_positive(name: str, value: float) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, np.floating)) or not value > 0 or math.isnan(value):
        raise InvalidArgumentError(f"{name} must be positive, got {value!r}")
    return float(value)


def gate_fidelity(delta: float, big_delta: float, beta: float) -> float:
    """F = delta exp(beta (Delta - delta)), proportionality constant 1."""
    delta = _check_positive("delta", delta)
    big_delta = _check_positive("Delta", big_delta)
    beta = _check_positive("beta", beta)
    if delta >= big_delta:
        logger.warning(f"delta={delta} is not below Delta={big_delta}; outside the perturbative regime")
    return delta * math.exp(beta * (big_delta - delta))


def optimal_delta(beta: float) -> float:
    """argmax of gate_fidelity: delta0 = 1/beta = kT."""
    return 1.0 / _check_positive("beta", beta)


def fidelity_curve(beta: float, big_delta: float, deltas: Sequence[float]) -> np.ndarray:
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size == 0 or np.any(deltas <= 0):
        raise InvalidArgumentError("delta grid must be nonempty and positive")
    return deltas * np.exp(beta * (big_delta - deltas))


def optimal_delta_numeric(beta: float, big_delta: float, step: float) -> Tuple[float, float]:
    """(argmax, F at argmax) over the grid step, 2 step, ..., Delta."""
    beta = _check_positive("beta", beta)
    big_delta = _check_positive("Delta", big_delta)
    step = _check_positive("grid step", step)
    count = int(round(big_delta / step))
    if count < 1:
        raise InvalidArgumentError(f"grid step {step} is larger than Delta={big_delta}")
    grid = step * np.arange(1, count + 1)
    values = fidelity_curve(beta, big_delta, grid)
    best = int(np.argmax(values))
    return float(grid[best]), float(values[best])


# ---------------------------------------------------------------------------
# Gates with the bath switched on
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EncodedGateSpec:
    couplings: Dict[Pair, float]
    duration: float

    def __post_init__(self):
        checked = {}
        for pair, strength in self.couplings.items():
            strength = float(strength)
            if not math.isfinite(strength):
                raise InvalidArgumentError(f"coupling strength for {pair} must be finite, got {strength}")
            checked[_check_pair(pair)] = strength
        object.__setattr__(self, "couplings", checked)
        if not math.isfinite(self.duration) or self.duration < 0:
            raise InvalidArgumentError(f"gate duration must be >= 0, got {self.duration}")

    def regime_warnings(self, big_delta: float) -> List[str]:
        """Couplings that are not weak compared with the gap."""
        notes = []
        for (i, j), strength in self.couplings.items():
            if abs(strength) > WEAK_COUPLING_RATIO * big_delta:
                notes.append(f"delta_{i}{j}={strength} exceeds {WEAK_COUPLING_RATIO} Delta")
        for note in notes:
            logger.warning(note)
        return notes

    def logical_generator(self) -> np.ndarray:
        total = np.zeros((2, 2), dtype=complex)
        for pair, strength in self.couplings.items():
            total += strength * projected_generator(pair)
        return total

    def ideal_unitary(self) -> np.ndarray:
        return expm(-1j * self.duration * self.logical_generator())

    def physical_coupling(self) -> np.ndarray:
        dim = 2 ** CODE_QUBITS
        total = np.zeros((dim, dim), dtype=complex)
        for (i, j), strength in self.couplings.items():
            total += strength * exchange_operator(i, j, CODE_QUBITS)
        return total


@dataclass(frozen=True)
class GateResult:
    unitary: np.ndarray = field(repr=False)    # nearest SU(2) to the achieved map
    ideal: np.ndarray = field(repr=False)
    transfer: np.ndarray = field(repr=False)   # Bloch-vector transfer matrix
    fidelity: float
    unitary_error: float
    leakage: float


def su2_from_rotation(transfer: np.ndarray) -> np.ndarray:
    """SU(2) element whose adjoint action is the rotation closest to transfer."""
    x, y, z, w = Rotation.from_matrix(np.asarray(transfer, dtype=float)).as_quat()
    return w * np.eye(2) - 1j * (x * PAULI[0] + y * PAULI[1] + z * PAULI[2])


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - |tr(u^dag v)|/2, zero iff equal up to a global phase."""
    return max(0.0, 1.0 - abs(np.trace(u.conj().T @ v)) / 2.0)


def gate_under_noise(spec: EncodedGateSpec, model: LindbladModel, dt: Optional[float] = None) -> GateResult:
    """Run the exchange gate on the six axis states under the model's dissipators."""
    if model.spec.n != CODE_QUBITS:
        raise InvalidArgumentError(f"gates act on the n = {CODE_QUBITS} register")
    spec.regime_warnings(model.spec.delta)
    hamiltonian = model.hamiltonian + spec.physical_coupling()
    total = propagator(model, spec.duration, dt, hamiltonian)
    ideal = spec.ideal_unitary()
    words = _words()
    dim = model.dim

    blochs: Dict[str, np.ndarray] = {}
    fidelities, leakages = [], []
    for label, amplitudes in axis_states():
        psi = words @ amplitudes
        rho = (total @ np.outer(psi, psi.conj()).reshape(-1)).reshape(dim, dim)
        problem = state_problem(rho)
        if problem:
            raise IntegrationError(f"gate evolution of {label} became invalid ({problem}); try a smaller dt")
        logical, leak = decode(rho)
        target = words @ (ideal @ amplitudes)
        fidelities.append(float(np.real(np.vdot(target, rho @ target))))
        leakages.append(leak)
        blochs[label] = bloch_vector(logical)

    transfer = np.column_stack([
        (blochs[f"+{axis}"] - blochs[f"-{axis}"]) / 2.0 for axis in ("x", "y", "z")
    ])
    achieved = su2_from_rotation(transfer)
    result = GateResult(
        unitary=achieved,
        ideal=ideal,
        transfer=transfer,
        fidelity=float(np.mean(fidelities)),
        unitary_error=phase_distance(ideal, achieved),
        leakage=float(np.mean(leakages)),
    )
    logger.info(f"Gate at beta={model.beta}: fidelity {result.fidelity:.6f}, leakage {result.leakage:.3e}")
    return result


# ---------------------------------------------------------------------------
# Eight-qubit ground space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroundSpaceReport:
    dimension: int
    basis: np.ndarray = field(repr=False)
    product_residual: float
    exchange_leakage: float

    @property
    def passed(self) -> bool:
        return (self.dimension == GROUND_DIMENSION
                and max(self.product_residual, self.exchange_leakage) < RESIDUAL_TOL)


def h8_ground_space() -> GroundSpaceReport:
    """J_8 = 0 eigenspace of H0 on eight qubits and its invariance checks."""
    n = GROUND_QUBITS
    energies, vectors = eigh(collective_hamiltonian(SystemSpec(n, 1.0)))
    basis = vectors[:, energies < ROUNDING_TOL]
    logger.debug(f"Eight-qubit ground space has dimension {basis.shape[1]}")
    p_gs = projector(basis)
    outside = np.eye(2 ** n) - p_gs

    words = logical_basis()
    product_residual = max(
        float(np.linalg.norm(outside @ np.kron(a.vector, b.vector)))
        for a in words for b in words
    )
    exchange_leakage = max(
        max_abs(outside @ exchange_operator(i, j, n) @ basis)
        for i, j in exchange_pairs(n)
    )
    report = GroundSpaceReport(basis.shape[1], basis, product_residual, exchange_leakage)
    if not report.passed:
        logger.error(f"Eight-qubit ground space checks failed: {report}")
    return report
