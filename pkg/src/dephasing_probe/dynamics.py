"""Encoding dynamics: decay factor Gamma(t), phase factor Phi(t), probe state.

Discrete reservoirs are summed exactly:

    Gamma(t) = sum_k 4 |g_k|^2 (1 - cos w_k t) / w_k^2 * coth(beta w_k / 2)
    Phi(t)   = omega0 t [lab frame only]
               - sum_k 4 Re[xi_k g_k^* / w_k] t
               + sum_k 4 Im[xi_k g_k^* (1 - e^{-i w_k t}) / w_k^2]

The BEC continuum (zero temperature) is integrated with the oscillatory
quadrature; continuum results are reported in the rotating frame (the
omega0 t term is dropped there; omega0 carries no a_B dependence, so every
estimation quantity is frame independent).

The dephasing channel maps the |+> probe to the Bloch vector
(e^-Gamma cos Phi, e^-Gamma sin Phi, 0).
"""

import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .quadrature import (DEFAULT_MAX_EVALS, DEFAULT_REL_TOL, integrate_adaptive,
                         integrate_oscillatory)
from .reservoirs import (BecReservoirModel, DerivedBecQuantities,
                         DiscreteReservoir, derive_quantities)

__all__ = [
    "QubitState",
    "EncodingTrajectory",
    "FRAME_LAB",
    "FRAME_ROTATING",
    "gamma_discrete",
    "phi_discrete",
    "gamma_bec",
    "phi_bec",
    "gamma_bec_stationary",
    "evolve_state",
    "bec_trajectory",
    "discrete_trajectory",
    "TRAJECTORY_CSV_COLUMNS",
]

FRAME_LAB = "lab"
FRAME_ROTATING = "rotating"

TRAJECTORY_CSV_COLUMNS = ("t_s", "gamma", "phi_rad", "coherence", "frame")


@dataclass(frozen=True)
class QubitState:
    """Probe state as a Bloch vector; dephasing-channel outputs carry (gamma, phi)."""

    bloch: tuple[float, float, float]
    gamma: float | None = None
    phi: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "bloch", tuple(float(c) for c in self.bloch))
        if len(self.bloch) != 3:
            raise ValueError("bloch vector needs three components")
        if self.length > 1.0 + 1e-12:
            raise ValueError(f"Bloch vector length {self.length!r} exceeds 1")

    @property
    def length(self) -> float:
        return math.sqrt(sum(c * c for c in self.bloch))

    @property
    def coherence(self) -> complex:
        """Upper-to-lower level coherence <1|rho|0> = (w_x - i w_y)/2."""
        return 0.5 * (self.bloch[0] - 1j * self.bloch[1])

    def density_matrix(self) -> np.ndarray:
        """2x2 density matrix in the (|0>, |1>) basis (|1> = upper level)."""
        wx, wy, wz = self.bloch
        return 0.5 * np.array([[1.0 - wz, wx + 1j * wy],
                               [wx - 1j * wy, 1.0 + wz]], dtype=complex)


def evolve_state(gamma: float, phi: float) -> QubitState:
    """Probe state after dephasing: bloch = (e^-G cos Phi, e^-G sin Phi, 0)."""
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    w = math.exp(-gamma)
    return QubitState(bloch=(w * math.cos(phi), w * math.sin(phi), 0.0),
                      gamma=gamma, phi=phi)


def _coth_half(beta: float, omega: np.ndarray) -> np.ndarray:
    """coth(beta*omega/2) as 1 + 2/(exp(beta*omega) - 1); 1 at beta = inf."""
    if math.isinf(beta):
        return np.ones_like(omega)
    return 1.0 + 2.0 / np.expm1(beta * omega)


def gamma_discrete(res: DiscreteReservoir, t: float) -> float:
    """Exact decay factor of a discrete reservoir at time t >= 0."""
    if t < 0:
        raise ValueError("t must be >= 0")
    w, g, _ = res.arrays()
    x = w * t
    terms = 4.0 * np.abs(g) ** 2 * (2.0 * np.sin(x / 2.0) ** 2) / w ** 2
    return float(np.sum(terms * _coth_half(res.beta, w)))


def phi_discrete(res: DiscreteReservoir, t: float, omega0: float = 0.0,
                 frame: str = FRAME_LAB) -> float:
    """Exact phase factor of a discrete reservoir at time t >= 0.

    The rotating frame drops the omega0 t term; the secular displacement
    phase -4 sum Re[xi g*/w] t is physical and kept in both frames.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if frame not in (FRAME_LAB, FRAME_ROTATING):
        raise ValueError(f"unknown frame {frame!r}")
    w, g, xi = res.arrays()
    xig = xi * np.conj(g)
    phase = -4.0 * float(np.sum(np.real(xig / w))) * t
    phase += 4.0 * float(np.sum(np.imag(xig * (1.0 - np.exp(-1j * w * t)) / w ** 2)))
    if frame == FRAME_LAB:
        phase += omega0 * t
    return phase


def _kernel_args(model: BecReservoirModel, derived: DerivedBecQuantities | None):
    if derived is None:
        derived = derive_quantities(model)
    return derived, derived.P, derived.alpha, derived.s, model.ell_A, model.k_max


def _oscillatory(kernel, t, model, derived, rel_tol, max_evals):
    derived, pref, alpha, s, ell, k_max = _kernel_args(model, derived)

    def f(k, tt):
        return kernel(k, tt, pref, alpha, s, ell)

    return integrate_oscillatory(
        f, t, k_max, rel_tol=rel_tol, max_evals=max_evals,
        omega=lambda k: kernels.dispersion(np.asarray(k, dtype=float), alpha, s),
        omega_inverse=lambda w: kernels.dispersion_inverse(np.asarray(w, dtype=float), alpha, s))


def gamma_bec(model: BecReservoirModel, t: float,
              derived: DerivedBecQuantities | None = None,
              rel_tol: float = DEFAULT_REL_TOL,
              max_evals: int = DEFAULT_MAX_EVALS) -> float:
    """Continuum decay factor at zero temperature (dimensionless, >= 0)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return _oscillatory(kernels.kernel_gamma, t, model, derived, rel_tol, max_evals).value


def phi_bec(model: BecReservoirModel, t: float,
            derived: DerivedBecQuantities | None = None,
            rel_tol: float = DEFAULT_REL_TOL,
            max_evals: int = DEFAULT_MAX_EVALS) -> float:
    """Continuum phase factor, rotating frame, radians.

    Linear in chi by construction (the chi-independent integral is evaluated
    once and scaled), so phi(chi)/phi(1) is exact.  Sign is -sign(chi) for
    t > 0.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if derived is None:
        derived = derive_quantities(model)
    base = _oscillatory(kernels.kernel_phi, t, model, derived, rel_tol, max_evals).value
    return derived.chi * base


def gamma_bec_stationary(model: BecReservoirModel,
                         derived: DerivedBecQuantities | None = None,
                         rel_tol: float = DEFAULT_REL_TOL,
                         max_evals: int = DEFAULT_MAX_EVALS) -> float:
    """Long-time limit of the decay factor (the cosine term time-averages out)."""
    derived, pref, alpha, s, ell, k_max = _kernel_args(model, derived)
    res = integrate_adaptive(
        lambda k: kernels.kernel_gamma_stationary(k, pref, alpha, s, ell),
        0.0, k_max, rel_tol=rel_tol, max_evals=max_evals)
    return res.value


@dataclass(frozen=True)
class EncodingTrajectory:
    """Sampled (Gamma, Phi) history on a caller-supplied time grid."""

    times: np.ndarray
    gamma: np.ndarray
    phi: np.ndarray
    frame: str

    def __post_init__(self):
        for name in ("times", "gamma", "phi"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.times.shape == self.gamma.shape == self.phi.shape):
            raise ValueError("times, gamma, phi must have equal lengths")
        if self.frame not in (FRAME_LAB, FRAME_ROTATING):
            raise ValueError(f"unknown frame {self.frame!r}")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.gamma < 0):
            raise ValueError("gamma must be >= 0 everywhere")
        if self.times.size and self.times[0] == 0.0:
            if self.gamma[0] != 0.0 or self.phi[0] != 0.0:
                raise ValueError("at t = 0 both gamma and phi must vanish")

    @property
    def coherence(self) -> np.ndarray:
        return np.exp(-self.gamma)

    def to_csv(self, target) -> None:
        """Write columns t_s, gamma, phi_rad, coherence, frame."""
        close = False
        if isinstance(target, (str, bytes)) or hasattr(target, "__fspath__"):
            target = open(target, "w", newline="")
            close = True
        try:
            target.write(",".join(TRAJECTORY_CSV_COLUMNS) + "\n")
            coh = self.coherence
            for i in range(self.times.size):
                target.write(f"{float(self.times[i])!r},{float(self.gamma[i])!r},"
                             f"{float(self.phi[i])!r},{float(coh[i])!r},{self.frame}\n")
        finally:
            if close:
                target.close()

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def bec_trajectory(model: BecReservoirModel, times,
                   derived: DerivedBecQuantities | None = None,
                   rel_tol: float = DEFAULT_REL_TOL,
                   max_evals: int = DEFAULT_MAX_EVALS) -> EncodingTrajectory:
    """Continuum Gamma/Phi sampled on the given grid (rotating frame)."""
    if derived is None:
        derived = derive_quantities(model)
    times = np.asarray(times, dtype=float)
    gam = np.array([gamma_bec(model, t, derived, rel_tol, max_evals) for t in times])
    phi = np.array([phi_bec(model, t, derived, rel_tol, max_evals) for t in times])
    return EncodingTrajectory(times=times, gamma=gam, phi=phi, frame=FRAME_ROTATING)


def discrete_trajectory(res: DiscreteReservoir, times, omega0: float = 0.0,
                        frame: str = FRAME_LAB) -> EncodingTrajectory:
    """Discrete-sum Gamma/Phi sampled on the given grid."""
    times = np.asarray(times, dtype=float)
    gam = np.array([gamma_discrete(res, t) for t in times])
    phi = np.array([phi_discrete(res, t, omega0, frame) for t in times])
    return EncodingTrajectory(times=times, gamma=gam, phi=phi, frame=frame)
