# -*- coding: utf-8 -*-
"""
Harmonic-bath model of the four-qubit register.

Each s_alpha^(i) is split into J-sector blocks P_to s P_from.  Blocks between
different sectors become thermal absorption / emission jumps, the diagonal
J = 1 and J = 2 blocks a temperature-independent dephasing jump.  The master
equation is integrated with a fixed-step fourth-order scheme on the
row-major vectorized generator.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import constants

from config import DEFAULT_COUPLING, DEFAULT_FIT_WINDOW, WORKERS
from helpers import (
    DRIFT_TOL,
    EXACT_TOL,
    EstimationError,
    IntegrationError,
    InvalidArgumentError,
    NumericalError,
    STATE_TOL,
    as_half_integer,
    format_spin,
    frozen,
    max_abs,
    projector,
)
from results import ResultTable
from selection_rules import CODE_QUBITS, MAX_SCAN_QUBITS, code_words
from spin_operators import (
    Axis,
    HamiltonianForm,
    SystemSpec,
    check_qubit_count,
    collective_hamiltonian,
    single_spin_operator,
)
from spin_paths import basis_matrix, full_labeled_basis

logger = logging.getLogger(__name__)

# Sector pairs (m, n) that carry bath transitions for four qubits
ALLOWED_TRANSITIONS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 2), (1, 1), (2, 2))
SWEEP_COLUMNS = ["beta", "gamma_fit", "n_thermal", "slope_check"]
DEFAULT_SAMPLES = 40
MAX_RECORDS = 200
LEAKAGE_NOISE = 1e-9   # relative dip tolerated in a fitted leakage curve

Coupling = Union[float, Mapping[Tuple[int, str], float]]


# ---------------------------------------------------------------------------
# Sectors and transition operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sector:
    j: Fraction
    projector: np.ndarray = field(repr=False)
    rank: int


@dataclass(frozen=True)
class SectorProjectors:
    n: int
    sectors: Tuple[Sector, ...]
    basis: np.ndarray = field(repr=False)   # coupled basis, columns grouped by sector
    labels: Tuple[Fraction, ...] = field(repr=False)

    def projector(self, j) -> np.ndarray:
        j = as_half_integer(j)
        for sector in self.sectors:
            if sector.j == j:
                return sector.projector
        raise InvalidArgumentError(f"no J = {j} sector for n = {self.n}")

    @property
    def ranks(self) -> Dict[Fraction, int]:
        return {s.j: s.rank for s in self.sectors}

    def residual(self) -> float:
        """Worst of idempotency, mutual orthogonality and completeness."""
        dim = 2 ** self.n
        worst = max_abs(sum(s.projector for s in self.sectors) - np.eye(dim))
        for a in self.sectors:
            worst = max(worst, max_abs(a.projector @ a.projector - a.projector))
            for b in self.sectors:
                if a.j < b.j:
                    worst = max(worst, max_abs(a.projector @ b.projector))
        return worst


@lru_cache(maxsize=None)
def _sector_projectors(n: int) -> SectorProjectors:
    states = full_labeled_basis(n)
    sectors, blocks, labels = [], [], []
    for j in sorted({s.j for s in states}):
        columns = basis_matrix([s for s in states if s.j == j])
        sectors.append(Sector(j, frozen(projector(columns)), columns.shape[1]))
        blocks.append(columns)
        labels.extend([j] * columns.shape[1])
    result = SectorProjectors(n, tuple(sectors), frozen(np.hstack(blocks)), tuple(labels))
    residual = result.residual()
    if residual > EXACT_TOL:
        logger.error(f"Sector projectors for n={n} fail their identities ({residual:.3e})")
        raise NumericalError(f"sector projector residual {residual:.3e} exceeds {EXACT_TOL}")
    return result


def sector_projectors(n: int) -> SectorProjectors:
    """Spectral projectors of (S^(n))^2, grouped by J_n."""
    n = check_qubit_count(n, MAX_SCAN_QUBITS)
    return _sector_projectors(n)


@dataclass(frozen=True)
class TransitionOperator:
    """P_{to_j} s_axis^(i) P_{from_j}."""
    qubit: int
    axis: Axis
    from_j: Fraction
    to_j: Fraction
    matrix: np.ndarray = field(repr=False)

    @property
    def allowed(self) -> bool:
        return is_allowed(self.from_j, self.to_j)

    @property
    def label(self) -> str:
        return f"s_{self.axis.value}({self.qubit}) {format_spin(self.from_j)}->{format_spin(self.to_j)}"


def is_allowed(from_j, to_j) -> bool:
    pair = tuple(sorted((as_half_integer(from_j), as_half_integer(to_j))))
    return pair in ALLOWED_TRANSITIONS


def transition_decomposition(i: int, axis=Axis.Z, n: int = CODE_QUBITS) -> List[TransitionOperator]:
    """All sector blocks of s_axis^(i); their sum reconstructs the operator."""
    if n != CODE_QUBITS:
        raise InvalidArgumentError(f"the transition set is defined for n = {CODE_QUBITS}, got n={n}")
    axis = Axis.parse(axis)
    op = single_spin_operator(axis, i, n)
    sectors = sector_projectors(n).sectors
    blocks = [
        TransitionOperator(i, axis, src.j, dst.j, frozen(dst.projector @ op @ src.projector))
        for src in sectors for dst in sectors
    ]
    rebuilt = max_abs(sum(b.matrix for b in blocks) - op)
    forbidden = max((max_abs(b.matrix) for b in blocks if not b.allowed), default=0.0)
    if max(rebuilt, forbidden) > EXACT_TOL:
        logger.error(f"Decomposition of s_{axis.value}({i}): rebuild {rebuilt:.3e}, forbidden {forbidden:.3e}")
        raise NumericalError(f"sector decomposition of s_{axis.value}({i}) is inconsistent")
    return blocks


# ---------------------------------------------------------------------------
# Thermal rates and the model
# ---------------------------------------------------------------------------

def thermal_occupation(beta: float, energy_gap: float) -> float:
    """Bose occupation 1/(e^{beta gap} - 1); 0 at beta = inf."""
    if not energy_gap > 0 or not math.isfinite(energy_gap):
        raise InvalidArgumentError(f"energy gap must be positive, got {energy_gap}")
    _check_beta(beta)
    x = beta * energy_gap
    if math.isinf(x):
        return 0.0
    return math.exp(-x) / -math.expm1(-x)


def beta_from_kelvin(kelvin: float) -> float:
    """Inverse temperature in 1/meV."""
    if not kelvin > 0 or not math.isfinite(kelvin):
        raise InvalidArgumentError(f"temperature must be a positive number of kelvin, got {kelvin}")
    k_b = constants.physical_constants["Boltzmann constant in eV/K"][0] * 1e3  # meV/K
    return 1.0 / (k_b * kelvin)


def transition_gap(m: int, n: int, delta: float) -> float:
    """(Delta/2) f(m, n) with f = n(n+1) - m(m+1)."""
    return 0.5 * delta * (n * (n + 1) - m * (m + 1))


def _check_beta(beta: float) -> None:
    if isinstance(beta, bool) or not isinstance(beta, (int, float, np.floating)) or not beta > 0:
        raise InvalidArgumentError(f"beta must be positive (inf allowed), got {beta!r}")


@dataclass(frozen=True)
class JumpTerm:
    operator: TransitionOperator
    rate: float
    kind: str       # absorption, emission or dephasing
    gap: float = 0.0


@dataclass
class LindbladModel:
    spec: SystemSpec
    beta: float
    couplings: Dict[Tuple[int, Axis], float]
    gamma0: Optional[float]
    jumps: Tuple[JumpTerm, ...]
    hamiltonian: np.ndarray = field(repr=False)
    _generator: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    _sector_generator: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.spec.dim

    def active_jumps(self) -> List[JumpTerm]:
        return [j for j in self.jumps if j.rate > 0]

    def max_rate(self) -> float:
        return max((j.rate for j in self.jumps), default=0.0)

    def rate_bound(self) -> float:
        """Sum of gamma ||A||^2 over all jumps; bounds every dissipative time scale."""
        return float(sum(j.rate * np.linalg.norm(j.operator.matrix, 2) ** 2 for j in self.active_jumps()))

    def detailed_balance_residual(self) -> float:
        """Largest |gamma_abs - gamma_em e^{-beta gap}| over absorption/emission pairs."""
        emission = {
            (j.operator.qubit, j.operator.axis, j.operator.to_j, j.operator.from_j): j
            for j in self.jumps if j.kind == "emission"
        }
        worst = 0.0
        for jump in self.jumps:
            if jump.kind != "absorption":
                continue
            op = jump.operator
            partner = emission[(op.qubit, op.axis, op.from_j, op.to_j)]
            boltzmann = 0.0 if math.isinf(self.beta) else math.exp(-self.beta * jump.gap)
            worst = max(worst, abs(jump.rate - partner.rate * boltzmann))
        return worst

    def default_dt(self) -> float:
        fastest = max(self.spec.delta, self.max_rate())
        return 0.01 / fastest

    def generator(self, hamiltonian: Optional[np.ndarray] = None) -> np.ndarray:
        """Vectorized generator L with d vec(rho)/dt = L vec(rho) (row-major vec)."""
        if hamiltonian is None and self._generator is not None:
            return self._generator
        h = self.hamiltonian if hamiltonian is None else np.asarray(hamiltonian)
        dim = self.dim
        if h.shape != (dim, dim):
            raise InvalidArgumentError(f"Hamiltonian must be {dim}x{dim}, got {h.shape}")
        gen = lindblad_generator(h, [(j.rate, j.operator.matrix) for j in self.active_jumps()])
        if hamiltonian is None:
            self._generator = gen
        return gen

    def sector_generator(self) -> np.ndarray:
        """The generator in the coupled basis, every operator cut exactly into its sector blocks.

        Ground-block populations reach the excited sectors only through the
        absorption terms.
        """
        if self._sector_generator is not None:
            return self._sector_generator
        sectors = sector_projectors(self.spec.n)
        basis = sectors.basis
        labels = np.array([float(j) for j in sectors.labels])

        def block(op: np.ndarray, to_j: Optional[Fraction] = None, from_j: Optional[Fraction] = None) -> np.ndarray:
            rotated = basis.conj().T @ op @ basis
            if to_j is None:
                return rotated * (labels[:, None] == labels[None, :])
            return rotated * np.outer(labels == float(to_j), labels == float(from_j))

        jumps = [(j.rate, block(j.operator.matrix, j.operator.to_j, j.operator.from_j)) for j in self.active_jumps()]
        self._sector_generator = lindblad_generator(block(self.hamiltonian), jumps)
        return self._sector_generator


def lindblad_generator(hamiltonian: np.ndarray, jumps: Sequence[Tuple[float, np.ndarray]]) -> np.ndarray:
    """-i(H x I - I x H^T) + sum gamma (A x A* - A^dag A x I / 2 - I x (A^dag A)^T / 2)."""
    eye = np.eye(hamiltonian.shape[0])
    gen = -1j * (np.kron(hamiltonian, eye) - np.kron(eye, hamiltonian.T))
    for rate, a in jumps:
        ada = a.conj().T @ a
        gen += rate * (np.kron(a, a.conj()) - 0.5 * np.kron(ada, eye) - 0.5 * np.kron(eye, ada.T))
    logger.debug(f"Built generator of dimension {gen.shape[0]} with {len(jumps)} jumps")
    return gen


def _parse_couplings(g: Coupling, n: int) -> Dict[Tuple[int, Axis], float]:
    if isinstance(g, Mapping):
        couplings = {(i, axis): 0.0 for i in range(1, n + 1) for axis in Axis}
        for key, value in g.items():
            try:
                i, axis = key
            except (TypeError, ValueError) as e:
                raise InvalidArgumentError(f"coupling keys are (qubit, axis) pairs, got {key!r}") from e
            if not isinstance(i, int) or not 1 <= i <= n:
                raise InvalidArgumentError(f"coupling qubit must be in 1..{n}, got {i!r}")
            couplings[(i, Axis.parse(axis))] = float(value)
    else:
        couplings = {(i, axis): float(g) for i in range(1, n + 1) for axis in Axis}
    for key, value in couplings.items():
        if not math.isfinite(value) or value < 0:
            raise InvalidArgumentError(f"coupling g{key[0]},{key[1].value} must be >= 0, got {value}")
    return couplings


def build_model(spec: SystemSpec, beta: float, g: Coupling = DEFAULT_COUPLING,
                gamma0: Optional[float] = None,
                form=HamiltonianForm.SPIN_SQUARED) -> LindbladModel:
    """Thermal jump set: g^2 n(T) up, g^2 (n(T)+1) down, gamma0 (default g^2) within J = 1, 2."""
    if spec.n != CODE_QUBITS:
        raise InvalidArgumentError(f"the bath model is defined for n = {CODE_QUBITS}, got n={spec.n}")
    _check_beta(beta)
    if gamma0 is not None and (not math.isfinite(gamma0) or gamma0 < 0):
        raise InvalidArgumentError(f"gamma0 must be >= 0, got {gamma0}")
    couplings = _parse_couplings(g, spec.n)

    jumps: List[JumpTerm] = []
    for (i, axis), strength in couplings.items():
        blocks = {(b.from_j, b.to_j): b for b in transition_decomposition(i, axis, spec.n)}
        g2 = strength ** 2
        for m, k in ALLOWED_TRANSITIONS:
            if m == k:
                rate = g2 if gamma0 is None else gamma0
                jumps.append(JumpTerm(blocks[(m, k)], rate, "dephasing"))
                continue
            gap = transition_gap(m, k, spec.delta)
            occupation = thermal_occupation(beta, gap)
            jumps.append(JumpTerm(blocks[(m, k)], g2 * occupation, "absorption", gap))
            jumps.append(JumpTerm(blocks[(k, m)], g2 * (occupation + 1.0), "emission", gap))

    model = LindbladModel(spec, float(beta), couplings, gamma0, tuple(jumps), collective_hamiltonian(spec, form))
    residual = model.detailed_balance_residual()
    if residual > EXACT_TOL * max(1.0, model.max_rate()):
        raise NumericalError(f"stored rates break detailed balance by {residual:.3e}")
    logger.debug(f"Model beta={beta}: {len(model.active_jumps())} active jumps, max rate {model.max_rate():.3e}")
    return model


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    times: List[float]
    states: List[np.ndarray] = field(repr=False)
    observables: Dict[str, List[float]] = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def as_density_matrix(state, dim: int) -> np.ndarray:
    """Accept a state vector, anything with .vector, or a density matrix."""
    state = np.asarray(getattr(state, "vector", state), dtype=complex)
    if state.shape == (dim,):
        norm = np.linalg.norm(state)
        if abs(norm - 1.0) > STATE_TOL:
            raise InvalidArgumentError(f"state vector has norm {norm}, expected 1")
        return np.outer(state, state.conj())
    if state.shape != (dim, dim):
        raise InvalidArgumentError(f"expected a {dim}-vector or {dim}x{dim} density matrix, got {state.shape}")
    problem = state_problem(state)
    if problem:
        raise InvalidArgumentError(f"initial density matrix is invalid: {problem}")
    return state.copy()


def state_problem(rho: np.ndarray) -> Optional[str]:
    """None for a valid density matrix, otherwise a description of the defect."""
    hermiticity = max_abs(rho - rho.conj().T)
    if hermiticity > STATE_TOL:
        return f"not Hermitian (deviation {hermiticity:.3e})"
    trace = float(np.real(np.trace(rho)))
    if abs(trace - 1.0) > STATE_TOL:
        return f"trace {trace:.12g} differs from 1"
    lowest = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lowest < -STATE_TOL:
        return f"negative eigenvalue {lowest:.3e}"
    return None


def step_matrix(generator: np.ndarray, dt: float) -> np.ndarray:
    """One fourth-order step, I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24 in Horner form."""
    hl = dt * generator
    eye = np.eye(generator.shape[0])
    return eye + hl @ (eye + hl @ (eye + hl @ (eye + hl / 4.0) / 3.0) / 2.0)


def _schedule(model: LindbladModel, t_final: float, dt: Optional[float]) -> Tuple[int, float]:
    if not t_final >= 0 or not math.isfinite(t_final):
        raise InvalidArgumentError(f"t_final must be >= 0, got {t_final}")
    dt = model.default_dt() if dt is None else dt
    if not dt > 0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    if t_final == 0:
        return 0, dt
    steps = max(1, math.ceil(t_final / dt - 1e-9))
    return steps, t_final / steps


def _observe(rho: np.ndarray, sectors: SectorProjectors, reference: Optional[np.ndarray]) -> Dict[str, float]:
    values = {"trace": float(np.real(np.trace(rho)))}
    leakage = 0.0
    for sector in sectors.sectors:
        population = float(np.real(np.trace(sector.projector @ rho)))
        values[f"population_j{format_spin(sector.j)}"] = population
        if sector.j != 0:
            leakage += population
    values["leakage"] = leakage
    if reference is not None:
        values["fidelity"] = float(np.real(np.vdot(reference, rho @ reference)))
    return values


def evolve(model: LindbladModel, rho0, t_final: float, dt: Optional[float] = None,
           hamiltonian: Optional[np.ndarray] = None, record_every: Optional[int] = None,
           reference=None) -> Trajectory:
    """Integrate the master equation, recording states and observables."""
    dim = model.dim
    rho = as_density_matrix(rho0, dim)
    ref = None if reference is None else np.asarray(getattr(reference, "vector", reference), dtype=complex)
    steps, h = _schedule(model, t_final, dt)
    if record_every is None:
        record_every = max(1, steps // MAX_RECORDS)
    step = step_matrix(model.generator(hamiltonian), h)
    sectors = sector_projectors(model.spec.n)

    trajectory = Trajectory([], [], {})

    def record(k: int, state: np.ndarray) -> None:
        problem = state_problem(state)
        if problem:
            logger.error(f"Integration failed at t={k * h:.6g}: {problem}")
            raise IntegrationError(f"density matrix became invalid at t={k * h:.6g} ({problem}); try a smaller dt")
        trajectory.times.append(k * h)
        trajectory.states.append(state)
        for name, value in _observe(state, sectors, ref).items():
            trajectory.observables.setdefault(name, []).append(value)

    vec = rho.reshape(-1)
    record(0, rho)
    for k in range(1, steps + 1):
        vec = step @ vec
        drift = abs(np.sum(vec[:: dim + 1]) - 1.0)
        if drift > DRIFT_TOL:
            logger.error(f"Trace drift {drift:.3e} at step {k} (dt={h:.3e})")
            raise IntegrationError(f"trace drifted by {drift:.3e} at t={k * h:.6g}; try a smaller dt")
        if k % record_every == 0 or k == steps:
            record(k, vec.reshape(dim, dim).copy())
    logger.debug(f"Evolved {steps} steps of dt={h:.3e}, {len(trajectory.times)} records")
    return trajectory


def propagator(model: LindbladModel, t_final: float, dt: Optional[float] = None,
               hamiltonian: Optional[np.ndarray] = None) -> np.ndarray:
    """Step matrix raised to the number of steps (repeated squaring)."""
    steps, h = _schedule(model, t_final, dt)
    logger.debug(f"Propagator over t={t_final}: {steps} steps of dt={h:.3e}")
    return np.linalg.matrix_power(step_matrix(model.generator(hamiltonian), h), steps)


def propagate(model: LindbladModel, rho0, t_final: float, dt: Optional[float] = None,
              hamiltonian: Optional[np.ndarray] = None) -> np.ndarray:
    """Final state only."""
    dim = model.dim
    rho = as_density_matrix(rho0, dim)
    total = propagator(model, t_final, dt, hamiltonian)
    final = (total @ rho.reshape(-1)).reshape(dim, dim)
    problem = state_problem(final)
    if problem:
        raise IntegrationError(f"final density matrix is invalid ({problem}); try a smaller dt")
    return final


def generator_residual(model: LindbladModel, rho, hamiltonian: Optional[np.ndarray] = None) -> float:
    """Largest entry of L[rho]; zero for a fixed point."""
    rho = as_density_matrix(rho, model.dim)
    return max_abs(model.generator(hamiltonian) @ rho.reshape(-1))


def first_order_leakage_rate(model: LindbladModel, rho) -> float:
    """Initial d/dt of 1 - Tr(P0 rho): sum of gamma Tr((I - P0) A rho A^dag)."""
    rho = as_density_matrix(rho, model.dim)
    outside = np.eye(model.dim) - sector_projectors(model.spec.n).projector(0)
    rate = 0.0
    for jump in model.active_jumps():
        a = jump.operator.matrix
        rate += jump.rate * float(np.real(np.trace(outside @ a @ rho @ a.conj().T)))
    return rate


def _logical_density(model: LindbladModel, logical_state) -> np.ndarray:
    rho = as_density_matrix(logical_state, model.dim)
    p0 = sector_projectors(model.spec.n).projector(0)
    if max_abs(p0 @ rho @ p0 - rho) > STATE_TOL:
        raise InvalidArgumentError("the logical state must lie in the J = 0 block")
    return rho


def _sector_leakage(model: LindbladModel, rho0: np.ndarray, window: float, dt: float,
                    samples: int) -> Tuple[np.ndarray, np.ndarray]:
    """Times and excited-sector population, integrated in the coupled basis."""
    sectors = sector_projectors(model.spec.n)
    basis = sectors.basis
    ground = np.array([j == 0 for j in sectors.labels])
    dim = model.dim

    rho = basis.conj().T @ rho0 @ basis
    rho = rho * np.outer(ground, ground)
    rho /= np.real(np.trace(rho))
    excited = np.flatnonzero(~ground) * (dim + 1)

    steps, h = _schedule(model, window, dt)
    record_every = max(1, steps // samples)
    step = step_matrix(model.sector_generator(), h)
    vec = rho.reshape(-1)
    times, leak = [0.0], [float(np.sum(np.real(vec[excited])))]
    for k in range(1, steps + 1):
        vec = step @ vec
        drift = abs(np.sum(vec[:: dim + 1]) - 1.0)
        if drift > DRIFT_TOL:
            raise IntegrationError(f"trace drifted by {drift:.3e} at t={k * h:.6g}; try a smaller dt")
        if k % record_every == 0 or k == steps:
            times.append(k * h)
            leak.append(float(np.sum(np.real(vec[excited]))))
    return np.array(times), np.array(leak)


@dataclass(frozen=True)
class LeakageFit:
    gamma: float
    gamma_guess: float
    window: float
    times: Tuple[float, ...]
    leakage: Tuple[float, ...]


def fit_leakage(model: LindbladModel, logical_state, fit_window: float = DEFAULT_FIT_WINDOW,
                samples: int = DEFAULT_SAMPLES, dt: Optional[float] = None,
                t_max: Optional[float] = None) -> LeakageFit:
    """Fit the excited-sector population Tr((I - P0) rho(t)) to 1 - exp(-Gamma t) over an early window."""
    if not fit_window > 0:
        raise InvalidArgumentError(f"fit window must be positive, got {fit_window}")
    rho0 = _logical_density(model, logical_state)
    guess = first_order_leakage_rate(model, rho0)
    if guess <= 0.0:
        logger.debug(f"No jump leaves the ground block at beta={model.beta}; Gamma = 0")
        return LeakageFit(0.0, 0.0, 0.0, (0.0,), (0.0,))

    kappa = max(guess, model.rate_bound())
    window = fit_window / kappa
    if t_max is not None:
        if not t_max > 0:
            raise InvalidArgumentError(f"t_max must be positive, got {t_max}")
        window = min(window, t_max)
    step = window / samples if dt is None else min(dt, window / samples)
    step = min(step, model.default_dt())
    logger.debug(f"Leakage fit beta={model.beta}: guess {guess:.4e}, window {window:.4e}, dt {step:.3e}")
    times, leak = _sector_leakage(model, rho0, window, step, samples)

    if np.any(np.diff(leak) < -LEAKAGE_NOISE * leak[-1]) or not 0.0 < leak[-1] < 1.0:
        raise EstimationError(f"leakage is not monotone over the fit window at beta={model.beta}")
    y = -np.log1p(-leak)
    slope, *_ = np.linalg.lstsq(times[:, None], y, rcond=None)
    gamma = float(slope[0])
    if not math.isfinite(gamma) or gamma <= 0:
        raise EstimationError(f"fitted leakage rate {gamma} is not positive at beta={model.beta}")
    return LeakageFit(gamma, guess, window, tuple(times.tolist()), tuple(leak.tolist()))


def leakage_rate(model: LindbladModel, logical_state, fit_window: float = DEFAULT_FIT_WINDOW,
                 dt: Optional[float] = None, t_max: Optional[float] = None) -> float:
    return fit_leakage(model, logical_state, fit_window, dt=dt, t_max=t_max).gamma


# ---------------------------------------------------------------------------
# Temperature sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelTemplate:
    """Everything of a model except the temperature."""
    spec: SystemSpec
    g: Coupling = DEFAULT_COUPLING
    gamma0: Optional[float] = None
    amplitudes: Tuple[complex, complex] = (1.0, 0.0)
    fit_window: float = DEFAULT_FIT_WINDOW
    dt: Optional[float] = None
    t_final: Optional[float] = None   # upper bound on the fit window

    def at(self, beta: float) -> LindbladModel:
        return build_model(self.spec, beta, self.g, self.gamma0)

    def logical_vector(self) -> np.ndarray:
        a, b = (complex(x) for x in self.amplitudes)
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > STATE_TOL:
            raise InvalidArgumentError(f"logical amplitudes must satisfy |a|^2 + |b|^2 = 1, got {norm}")
        words = basis_matrix(code_words(self.spec.n))
        return words @ np.array([a, b])


def local_slopes(x: Sequence[float], y: Sequence[float]) -> List[float]:
    """d log y / dx between neighbouring rows (first row uses the next one)."""
    slopes: List[float] = []
    for k in range(len(x)):
        a, b = (k - 1, k) if k > 0 else (0, 1)
        if b >= len(x) or x[b] == x[a] or y[a] <= 0 or y[b] <= 0 or not math.isfinite(x[b] - x[a]):
            slopes.append(float("nan"))
            continue
        slopes.append((math.log(y[b]) - math.log(y[a])) / (x[b] - x[a]))
    return slopes


def suppression_slope(betas: Sequence[float], gammas: Sequence[float], delta: float,
                      low: float = 3.0, high: float = 6.0) -> float:
    """Least-squares slope of log Gamma against beta*Delta over [low, high]."""
    x = np.array([b * delta for b in betas], dtype=float)
    y = np.array(gammas, dtype=float)
    keep = (x >= low) & (x <= high) & (y > 0) & np.isfinite(x)
    if np.count_nonzero(keep) < 2:
        raise EstimationError(f"need two positive rates with beta*Delta in [{low}, {high}]")
    slope, _ = np.polyfit(x[keep], np.log(y[keep]), 1)
    return float(slope)


def temperature_sweep(template: ModelTemplate, betas: Sequence[float],
                      workers: Optional[int] = None) -> ResultTable:
    """Leakage rate for every beta; rows keep the input order."""
    betas = [float(b) for b in betas]
    if not betas:
        raise InvalidArgumentError("beta list must not be empty")
    for beta in betas:
        _check_beta(beta)
    logical = template.logical_vector()
    workers = WORKERS if workers is None else workers

    def one(beta: float) -> float:
        return leakage_rate(template.at(beta), logical, template.fit_window, template.dt, template.t_final)

    logger.info(f"Sweeping {len(betas)} temperatures with {workers} worker(s)")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            gammas = list(pool.map(one, betas))
    else:
        gammas = [one(beta) for beta in betas]

    delta = template.spec.delta
    slopes = local_slopes([b * delta for b in betas], gammas)
    rows = [
        [beta, gamma, thermal_occupation(beta, delta), slope]
        for beta, gamma, slope in zip(betas, gammas, slopes)
    ]
    return ResultTable(list(SWEEP_COLUMNS), rows)
