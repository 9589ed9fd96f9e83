"""Reservoir descriptions: explicit discrete modes and the BEC continuum.

The discrete types carry mode frequencies and the two coupling amplitudes of
the generalized dephasing Hamiltonian

    H = omega0/2 sz + sum_k w_k b_k^+ b_k
        + sz sum_k (g_k b_k^+ + g_k^* b_k) + sum_k (xi_k b_k^+ + xi_k^* b_k)

where g_k couples to the qubit inversion and xi_k displaces the mode
irrespective of the qubit state.  In terms of the per-level couplings,
g_k = (g_k1 - g_k0)/2 and xi_k = (g_k1 + g_k0)/2; xi_k = 0 is the
antisymmetric-coupling limit g_k0 = -g_k1.

The BEC model describes an impurity qubit in a harmonic trap ground state
(width ell_A) immersed in a homogeneous condensate.  All quantities SI;
frequencies rad/s.  Derived couplings:

    g_B = 4 pi hbar^2 a_B / m_B            condensate contact strength
    g_i = 2 pi hbar^2 a_i / m_AB           impurity-condensate couplings
    chi = (a1 + a0) / (a1 - a0)            relative displacement-coupling ratio
    P   = 2 n (g1 - g0)^2 / (pi^2 hbar^2)  continuum kernel prefactor, m^3/s^2
    Delta = n (g1 - g0) / hbar             mean-field shift, rad/s
"""

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .constants import HBAR, species_mass_kg

__all__ = [
    "DiscreteMode",
    "DiscreteReservoir",
    "BecReservoirModel",
    "DerivedBecQuantities",
    "ModelValidationError",
    "build_bec_model",
    "derive_quantities",
    "bogoliubov_dispersion",
    "continuum_kernels",
    "discretize_bec",
    "MODEL_KEYS",
    "DILUTENESS_BOUND",
    "K_MAX_FACTOR",
]

# Working diluteness bound sqrt(n a_B^3) < 0.02: the value of the dilute-gas
# parameter at a_B = 15.9 nm (three times the Rb-Rb background length) for
# the reference density 1e20 m^-3.  Models beyond it are rejected.
DILUTENESS_BOUND = 0.02

# Upper integration cutoff for the continuum kernels, in units of 1/ell_A.
# The Gaussian envelope is exp(-72) < 1e-31 there.
K_MAX_FACTOR = 12.0


class ModelValidationError(ValueError):
    """A reservoir/model parameter set violates its validity constraints."""


@dataclass(frozen=True)
class DiscreteMode:
    """One reservoir mode: frequency omega > 0 and amplitudes g, xi (rad/s)."""

    omega: float
    g: complex
    xi: complex = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ModelValidationError(f"mode frequency must be > 0, got {self.omega!r}")

    @classmethod
    def from_level_couplings(cls, omega: float, g0: complex, g1: complex) -> "DiscreteMode":
        """Build from the couplings of the two qubit levels."""
        return cls(omega=omega, g=(g1 - g0) / 2, xi=(g1 + g0) / 2)

    def level_couplings(self) -> tuple[complex, complex]:
        """(g0, g1) recovered from (g, xi)."""
        return self.xi - self.g, self.xi + self.g


@dataclass(frozen=True)
class DiscreteReservoir:
    """Explicit mode list with inverse temperature beta (beta = inf is T = 0)."""

    modes: tuple[DiscreteMode, ...]
    beta: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if len(self.modes) == 0:
            raise ModelValidationError("reservoir needs at least one mode")
        if not self.beta > 0:
            raise ModelValidationError(f"beta must be > 0 (inf for T = 0), got {self.beta!r}")

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)

    def arrays(self):
        """(omega, g, xi) as arrays, for vectorized sums."""
        w = np.array([m.omega for m in self.modes], dtype=float)
        g = np.array([m.g for m in self.modes], dtype=complex)
        xi = np.array([m.xi for m in self.modes], dtype=complex)
        return w, g, xi


@dataclass(frozen=True)
class BecReservoirModel:
    """Impurity qubit in a homogeneous condensate (all SI units).

    n: condensate density (m^-3); m_B / m_A: boson / impurity masses (kg);
    ell_A: trap ground-state length (m); a0, a1: spin-dependent impurity
    scattering lengths (m); a_B: condensate scattering length (m);
    Omega_A: bare qubit splitting (rad/s).
    """

    n: float
    m_B: float
    m_A: float
    ell_A: float
    a0: float
    a1: float
    a_B: float
    Omega_A: float = 0.0

    def __post_init__(self):
        for name in ("n", "m_B", "m_A", "ell_A", "a_B"):
            if not getattr(self, name) > 0:
                raise ModelValidationError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.a1 == self.a0:
            raise ModelValidationError(
                "a1 = a0: probe decoupled from density fluctuations (g_k = 0 for all k)")
        dilute = math.sqrt(self.n * self.a_B ** 3)
        if dilute >= DILUTENESS_BOUND:
            raise ModelValidationError(
                f"diluteness sqrt(n a_B^3) = {dilute:.3g} exceeds the working bound "
                f"{DILUTENESS_BOUND} (a_B < 3 a_Rb = 15.9 nm at the reference density)")

    @property
    def k_max(self) -> float:
        """Upper cutoff of the continuum integrals (envelope < 1e-31 beyond)."""
        return K_MAX_FACTOR / self.ell_A

    def with_a_b(self, a_B: float) -> "BecReservoirModel":
        """Same model at a different condensate scattering length."""
        return BecReservoirModel(n=self.n, m_B=self.m_B, m_A=self.m_A,
                                 ell_A=self.ell_A, a0=self.a0, a1=self.a1,
                                 a_B=a_B, Omega_A=self.Omega_A)

    def with_chi(self, chi: float) -> "BecReservoirModel":
        """Rescale (a0, a1) to the requested coupling ratio, keeping a1 - a0."""
        da = self.a1 - self.a0
        return BecReservoirModel(n=self.n, m_B=self.m_B, m_A=self.m_A,
                                 ell_A=self.ell_A, a0=(chi - 1.0) * da / 2.0,
                                 a1=(chi + 1.0) * da / 2.0, a_B=self.a_B,
                                 Omega_A=self.Omega_A)


@dataclass(frozen=True)
class DerivedBecQuantities:
    """Coupling constants derived from a BecReservoirModel.

    Delta is the mean-field shift n (g1 - g0) / hbar.  (The corresponding
    symbol is defined with a different second index in part of the source
    literature; the g0 form is the one consistent with the level-coupling
    decomposition and is used throughout.)
    """

    g_B: float      # J m^3
    g0: float       # J m^3
    g1: float       # J m^3
    P: float        # m^3 / s^2
    chi: float      # dimensionless
    Delta: float    # rad/s
    omega0: float   # rad/s
    alpha: float    # free-particle coefficient e(k) = alpha k^2, rad m^2/s
    s: float        # interaction frequency scale n g_B / hbar, rad/s


def derive_quantities(model: BecReservoirModel) -> DerivedBecQuantities:
    """Compute the derived coupling set for a validated model."""
    g_B = 4.0 * math.pi * HBAR ** 2 * model.a_B / model.m_B
    m_ab = model.m_A * model.m_B / (model.m_A + model.m_B)
    g0 = 2.0 * math.pi * HBAR ** 2 * model.a0 / m_ab
    g1 = 2.0 * math.pi * HBAR ** 2 * model.a1 / m_ab
    P = 2.0 * model.n * (g1 - g0) ** 2 / (math.pi ** 2 * HBAR ** 2)
    chi = (model.a1 + model.a0) / (model.a1 - model.a0)
    Delta = model.n * (g1 - g0) / HBAR
    return DerivedBecQuantities(g_B=g_B, g0=g0, g1=g1, P=P, chi=chi,
                                Delta=Delta, omega0=model.Omega_A + Delta,
                                alpha=HBAR / (2.0 * model.m_B),
                                s=model.n * g_B / HBAR)


MODEL_KEYS = frozenset({
    "density_m3", "mass_A_kg", "species_A", "mass_B_kg", "species_B",
    "ell_A_m", "a0_m", "a1_m", "aB_m", "OmegaA_rad_s",
})

_REQUIRED_KEYS = ("density_m3", "ell_A_m", "a0_m", "a1_m", "aB_m")


def build_bec_model(raw: Mapping[str, float]) -> tuple[BecReservoirModel, DerivedBecQuantities]:
    """Validate a raw parameter map and derive the coupling constants.

    Accepted keys: density_m3, mass_A_kg | species_A, mass_B_kg | species_B,
    ell_A_m, a0_m, a1_m, aB_m, OmegaA_rad_s.  Masses default to a Na-23
    impurity in a Rb-87 condensate when omitted.
    """
    unknown = set(raw) - MODEL_KEYS
    if unknown:
        raise ModelValidationError(f"unknown model keys: {sorted(unknown)}")
    missing = [k for k in _REQUIRED_KEYS if k not in raw]
    if missing:
        raise ModelValidationError(f"missing model keys: {missing}")

    def mass_of(kg_key, species_key, default_species):
        if kg_key in raw and species_key in raw:
            raise ModelValidationError(f"give either {kg_key} or {species_key}, not both")
        if kg_key in raw:
            return float(raw[kg_key])
        return species_mass_kg(raw.get(species_key, default_species))

    model = BecReservoirModel(
        n=float(raw["density_m3"]),
        m_A=mass_of("mass_A_kg", "species_A", "Na23"),
        m_B=mass_of("mass_B_kg", "species_B", "Rb87"),
        ell_A=float(raw["ell_A_m"]),
        a0=float(raw["a0_m"]),
        a1=float(raw["a1_m"]),
        a_B=float(raw["aB_m"]),
        Omega_A=float(raw.get("OmegaA_rad_s", 0.0)),
    )
    return model, derive_quantities(model)


def paper_parameter_map(a_B: float = 5.3e-9, chi: float = 1.0) -> dict:
    """Reference Na-in-Rb parameter map: n = 1e20 m^-3, ell_A = 45 nm,
    a1 - a0 = 2.9 nm, with (a0, a1) set by the requested coupling ratio."""
    da = 2.9e-9
    return {
        "density_m3": 1e20,
        "species_A": "Na23",
        "species_B": "Rb87",
        "ell_A_m": 45e-9,
        "a0_m": (chi - 1.0) * da / 2.0,
        "a1_m": (chi + 1.0) * da / 2.0,
        "aB_m": a_B,
        "OmegaA_rad_s": 0.0,
    }


def bogoliubov_dispersion(k, model: BecReservoirModel, derived: DerivedBecQuantities | None = None):
    """Excitation frequency w(k) = sqrt(E_k^2 + 2 n g_B E_k) / hbar in rad/s.

    E_k = hbar^2 k^2 / (2 m_B); monotone increasing in k; w(0) = 0.
    """
    arr = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(arr < 0):
        raise ValueError("wavenumber must be >= 0")
    if derived is None:
        derived = derive_quantities(model)
    w = kernels.dispersion(arr, derived.alpha, derived.s)
    return float(w[0]) if np.ndim(k) == 0 else w


def continuum_kernels(model: BecReservoirModel, derived: DerivedBecQuantities | None = None):
    """Integrand pair (K_gamma, K_phi) of the zero-temperature continuum.

    K_gamma(k, t) = P k^2 E_k (1 - cos w t) exp(-k^2 ell^2/2) / w^3 and
    K_phi(k, t) = chi P k^2 E_k (sin w t - w t) exp(-k^2 ell^2/2) / w^3,
    in forms whose k -> 0 limit is evaluated analytically (both vanish).
    The k-integral of K_gamma is dimensionless, that of K_phi is in radians.
    """
    if derived is None:
        derived = derive_quantities(model)
    alpha, s, ell, pref, chi = derived.alpha, derived.s, model.ell_A, derived.P, derived.chi

    def k_gamma(k, t):
        return kernels.kernel_gamma(np.asarray(k, dtype=float), t, pref, alpha, s, ell)

    def k_phi(k, t):
        return chi * kernels.kernel_phi(np.asarray(k, dtype=float), t, pref, alpha, s, ell)

    return k_gamma, k_phi


def discretize_bec(model: BecReservoirModel, n_modes: int,
                   k_max: float | None = None) -> DiscreteReservoir:
    """Uniform-k midpoint discretization of the BEC couplings.

    Mode weights fold in the continuum measure k^2 dk / (2 pi^2) so that the
    discrete decay/phase sums converge to the continuum integrals as the
    mode count grows.  Zero temperature.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    derived = derive_quantities(model)
    k_max = model.k_max if k_max is None else k_max
    dk = k_max / n_modes
    k = (np.arange(n_modes) + 0.5) * dk
    w = kernels.dispersion(k, derived.alpha, derived.s)
    e = derived.alpha * k * k
    # 4 |g_j|^2 = P k^2 (e/w) exp(-k^2 ell^2/2) dk
    g = 0.5 * np.sqrt(derived.P * k * k * (e / w) * np.exp(-(k * model.ell_A) ** 2 / 2) * dk)
    modes = tuple(DiscreteMode(omega=float(wj), g=float(gj), xi=float(derived.chi * gj))
                  for wj, gj in zip(w, g))
    return DiscreteReservoir(modes=modes, beta=math.inf)
