"""Brute-force verifiers, independent of every closed form they check.

fock_evolve builds the full dephasing Hamiltonian in a truncated number
basis, evolves |+> (x) |vac> by exact dense exponentiation (via Hermitian
eigendecomposition, reused across times) and traces out the modes.  The
resulting coherence must reproduce (1/2) e^{-Gamma} e^{-i Phi} from the
closed-form sums; the truncation is accepted only once doubling the photon
cutoff moves the coherence by less than 1e-8.

qfi_numeric recomputes the QFI from the density-matrix eigensystem with
finite-difference derivatives, and classical_fisher_outcomes recomputes a
measurement's Fisher information from its outcome probabilities; both are
used to cross-check the Bloch-representation formulas.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import QubitState, gamma_discrete, phi_discrete
from .reservoirs import DiscreteReservoir

__all__ = [
    "FockConfig",
    "ConvergenceError",
    "fock_evolve",
    "fock_evolve_thermal",
    "qfi_numeric",
    "classical_fisher_outcomes",
    "oracle_suite",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "MAX_HILBERT_DIM",
]

MAX_HILBERT_DIM = 4096
_COHERENCE_CONVERGENCE = 1e-8

# Pauli matrices in the (|0>, |1>) basis with |1> the upper level, so
# sigma_z = |1><1| - |0><0| and the |+> state has Bloch vector (1, 0, 0).
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)


class ConvergenceError(RuntimeError):
    """Truncated evolution did not converge within the dimension budget."""


@dataclass(frozen=True)
class FockConfig:
    """Truncation settings: per-mode photon cutoff and stepped evolution."""

    n_max: int = 8
    modes: int = 1
    time_steps: int = 1

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not 1 <= self.modes <= 3:
            raise ValueError("mode count must be between 1 and 3")
        if self.time_steps < 1:
            raise ValueError("time_steps must be >= 1")
        if self.hilbert_dim > MAX_HILBERT_DIM:
            raise ValueError(
                f"Hilbert dimension {self.hilbert_dim} exceeds the bound {MAX_HILBERT_DIM}")

    @property
    def hilbert_dim(self) -> int:
        return 2 * (self.n_max + 1) ** self.modes


def _mode_operator(local: np.ndarray, index: int, n_modes: int, dim: int) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in range(n_modes):
        out = np.kron(out, local if m == index else np.eye(dim, dtype=complex))
    return out


def _hamiltonian(res: DiscreteReservoir, omega0: float, n_max: int) -> np.ndarray:
    d = n_max + 1
    n_modes = len(res.modes)
    dim_bath = d ** n_modes
    lower = np.diag(np.sqrt(np.arange(1, d)), 1).astype(complex)
    raise_op = lower.conj().T
    number = raise_op @ lower
    eye_bath = np.eye(dim_bath, dtype=complex)
    eye_q = np.eye(2, dtype=complex)

    h = np.kron(omega0 / 2.0 * PAULI_Z, eye_bath)
    for m, mode in enumerate(res.modes):
        num_m = _mode_operator(number, m, n_modes, d)
        up_m = _mode_operator(raise_op, m, n_modes, d)
        down_m = _mode_operator(lower, m, n_modes, d)
        h += np.kron(eye_q, mode.omega * num_m)
        h += np.kron(PAULI_Z, mode.g * up_m + np.conj(mode.g) * down_m)
        h += np.kron(eye_q, mode.xi * up_m + np.conj(mode.xi) * down_m)
    return h


def _evolve_states(res, omega0, n_max, t, time_steps, bath_states):
    """Evolve |+> (x) |bath_n> for each bath basis index; return 2x2 rho list."""
    d = n_max + 1
    n_modes = len(res.modes)
    dim_bath = d ** n_modes
    h = _hamiltonian(res, omega0, n_max)
    energies, vectors = np.linalg.eigh(h)
    phases = np.exp(-1j * energies * (t / time_steps))

    rhos = []
    for idx in bath_states:
        psi = np.zeros(2 * dim_bath, dtype=complex)
        psi[idx] = 1.0 / math.sqrt(2.0)            # |0> (x) |bath_idx>
        psi[dim_bath + idx] = 1.0 / math.sqrt(2.0)  # |1> (x) |bath_idx>
        coeff = vectors.conj().T @ psi
        for _ in range(time_steps):
            coeff = phases * coeff
        psi_t = vectors @ coeff
        m = psi_t.reshape(2, dim_bath)
        rhos.append(m @ m.conj().T)
    return rhos


def _bloch_of(rho: np.ndarray) -> tuple[float, float, float]:
    return (float(np.real(np.trace(rho @ PAULI_X))),
            float(np.real(np.trace(rho @ PAULI_Y))),
            float(np.real(np.trace(rho @ PAULI_Z))))


def _converged_vacuum_rho(res, t, omega0, cfg):
    """(rho, n_max_used): double the cutoff until the coherence settles."""
    n_modes = len(res.modes)
    prev = None
    last_change = math.nan
    n_max = cfg.n_max
    while 2 * (n_max + 1) ** n_modes <= MAX_HILBERT_DIM:
        rho, = _evolve_states(res, omega0, n_max, t, cfg.time_steps, [0])
        coherence = rho[1, 0]
        if prev is not None:
            last_change = abs(coherence - prev)
            if last_change < _COHERENCE_CONVERGENCE:
                return rho, n_max
        prev = coherence
        n_max *= 2
    raise ConvergenceError(
        f"coherence not converged within dimension bound {MAX_HILBERT_DIM} "
        f"(last change {last_change:.3e})")


def fock_evolve(res: DiscreteReservoir, t: float, omega0: float = 0.0,
                cfg: FockConfig = FockConfig()) -> QubitState:
    """Exact truncated evolution of the probe from |+> (x) |vac>.

    Zero-temperature reservoirs only.  Starting from cfg.n_max, the cutoff
    is doubled until the coherence moves by < 1e-8, then the refined result
    is returned; exceeding the dimension bound first raises.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if not res.zero_temperature:
        raise ValueError("fock_evolve needs a zero-temperature reservoir "
                         "(use fock_evolve_thermal)")
    if len(res.modes) > 3:
        raise ValueError("at most 3 modes supported")
    rho, _ = _converged_vacuum_rho(res, t, omega0, cfg)
    return QubitState(bloch=_bloch_of(rho))


def fock_evolve_thermal(res: DiscreteReservoir, t: float, omega0: float = 0.0,
                        cfg: FockConfig = FockConfig(),
                        weight_cut: float = 1e-8) -> QubitState:
    """Thermal-reservoir variant: Boltzmann mixture over initial Fock states.

    Initial states are mixed with weights prod_k (1 - e^{-beta w_k})
    e^{-beta w_k n_k}, truncated once the retained weight reaches
    1 - weight_cut.  Intended for beta w of order one, where few states
    carry the weight.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if res.zero_temperature:
        return fock_evolve(res, t, omega0, cfg)
    n_modes = len(res.modes)
    if n_modes > 3:
        raise ValueError("at most 3 modes supported")

    prev = None
    last_change = math.nan
    n_max = cfg.n_max
    while 2 * (n_max + 1) ** n_modes <= MAX_HILBERT_DIM:
        d = n_max + 1
        occupations = list(itertools.product(range(d), repeat=n_modes))
        weights = []
        for occ in occupations:
            w = 1.0
            for mode, n in zip(res.modes, occ):
                w *= (1.0 - math.exp(-res.beta * mode.omega)) * math.exp(-res.beta * mode.omega * n)
            weights.append(w)
        order = np.argsort(weights, kind="stable")[::-1]
        kept = []
        total = 0.0
        for i in order:
            kept.append(i)
            total += weights[i]
            if total >= 1.0 - weight_cut:
                break
        indices = [int(np.ravel_multi_index(occupations[i], (d,) * n_modes)) for i in kept]
        rhos = _evolve_states(res, omega0, n_max, t, cfg.time_steps, indices)
        rho = sum(weights[i] * r for i, r in zip(kept, rhos)) / total
        coherence = rho[1, 0]
        if prev is not None:
            last_change = abs(coherence - prev)
            if last_change < _COHERENCE_CONVERGENCE:
                return QubitState(bloch=_bloch_of(rho))
        prev = coherence
        n_max *= 2
    raise ConvergenceError(
        f"thermal coherence not converged within dimension bound {MAX_HILBERT_DIM} "
        f"(last change {last_change:.3e})")


def _richardson_matrix_derivative(state_at, lam, step):
    h = step * (abs(lam) if lam != 0.0 else 1.0)

    def rho(x):
        return np.asarray(state_at(x).density_matrix(), dtype=complex)

    def central(hh):
        return (rho(lam + hh) - rho(lam - hh)) / (2.0 * hh)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def qfi_numeric(state_at: Callable[[float], QubitState], lam: float,
                step: float = 1e-5) -> float:
    """QFI from the 2x2 eigensystem with finite-difference state derivatives.

    F = sum_i (dp_i)^2 / p_i + 2 sum_{i != j} (p_i - p_j)^2 / (p_i + p_j)
    |<i|dj>|^2, evaluated through the degeneracy-safe identity
    (p_i - p_j)^2 |<i|dj>|^2 = |<i|drho|j>|^2.  Eigenvalues within 1e-12 of
    0 or 1 switch to the pure-state branch F = 2 tr[(drho)^2].
    """
    rho = np.asarray(state_at(lam).density_matrix(), dtype=complex)
    drho = _richardson_matrix_derivative(state_at, lam, step)
    p, v = np.linalg.eigh(rho)
    if p.min() < 1e-12 or p.max() > 1.0 - 1e-12:
        return float(np.real(2.0 * np.trace(drho @ drho)))
    d_in_eig = v.conj().T @ drho @ v
    dp = np.real(np.diag(d_in_eig))
    fisher = float(np.sum(dp * dp / p))
    for i in range(2):
        for j in range(2):
            if i != j:
                fisher += 2.0 * abs(d_in_eig[i, j]) ** 2 / (p[i] + p[j])
    return fisher


def classical_fisher_outcomes(p_plus: Callable[[float], float], lam: float,
                              step: float = 1e-5) -> float:
    """Two-outcome classical Fisher information from probabilities.

    F = (dp+)^2/p+ + (dp-)^2/p- with p- = 1 - p+; derivatives by central
    differences with one Richardson pass.
    """
    p = float(p_plus(lam))
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie strictly inside (0, 1), got {p!r}")
    h = step * (abs(lam) if lam != 0.0 else 1.0)

    def central(hh):
        return (float(p_plus(lam + hh)) - float(p_plus(lam - hh))) / (2.0 * hh)

    dp = (4.0 * central(h / 2.0) - central(h)) / 3.0
    return dp * dp / p + dp * dp / (1.0 - p)


def _random_reservoir(rng: np.random.Generator, max_modes: int = 2) -> DiscreteReservoir:
    from .reservoirs import DiscreteMode
    n_modes = int(rng.integers(1, max_modes + 1))
    modes = []
    for _ in range(n_modes):
        omega = float(rng.uniform(0.5, 2.0))
        g = 0.3 * omega * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)) / math.sqrt(2.0)
        xi = 0.3 * omega * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)) / math.sqrt(2.0)
        modes.append(DiscreteMode(omega=omega, g=g, xi=xi))
    return DiscreteReservoir(modes=tuple(modes))


def oracle_suite(seed: int = 7, reservoirs: int = 50, times_per_case: int = 20,
                 tolerance: float = 1e-6) -> list[dict]:
    """Randomized equivalence checks of exact evolution vs the closed forms.

    Returns one report row per reservoir:
    {case_id, max_abs_error, n_max_used, passed}.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for case in range(reservoirs):
        res = _random_reservoir(rng)
        omega0 = float(rng.uniform(-1.0, 1.0))
        omega_min = min(m.omega for m in res.modes)
        times = rng.uniform(0.0, 4.0 * math.pi / omega_min, size=times_per_case)
        cfg = FockConfig(n_max=8, modes=len(res.modes))
        max_err = 0.0
        n_used = 0
        for t in times:
            rho, n_max = _converged_vacuum_rho(res, float(t), omega0, cfg)
            predicted = 0.5 * math.exp(-gamma_discrete(res, float(t))) * np.exp(
                -1j * phi_discrete(res, float(t), omega0))
            max_err = max(max_err, abs(rho[1, 0] - predicted))
            n_used = max(n_used, n_max)
        rows.append({
            "case_id": f"fock-vs-closed-form-{case:03d}",
            "max_abs_error": max_err,
            "n_max_used": n_used,
            "passed": bool(max_err <= tolerance),
        })
    return rows
