"""Quantum estimation layer for the dephasing probe.

For a probe state with Bloch vector w the quantum Fisher information of an
estimated parameter lambda is

    F_Q = |dw|^2                                  (pure, |w| = 1)
    F_Q = |dw|^2 + (w . dw)^2 / (1 - |w|^2)       (mixed)

which for the dephasing channel splits additively into a decay-induced and
a phase-induced part,

    F_par  = (dGamma)^2 / (e^{2 Gamma} - 1)
    F_perp = e^{-2 Gamma} (dPhi)^2 ,   F_Q = F_par + F_perp.

A two-outcome measurement along a fixed Bloch axis has Fisher information
(d<X>)^2 / (1 - <X>^2); the axis in the equatorial plane rotated by angle
phi_opt from the state direction, with

    tan(phi_opt) = w (1 - w^2) dPhi / dw_len ,  dw_len = -w dGamma,

saturates F_Q exactly.  The derivative with respect to the estimated
parameter is always taken at fixed measurement axis.

The QSNR is Q = lambda^2 F and the single-shot optimal relative error is
1/sqrt(nu Q).  For the BEC probe the phase-induced QSNR grows like
(chi t)^2 at late times; eta = Q_perp/(chi t)^2 converges to a plateau
eta* that this module computes both empirically (plateau fit) and from the
asymptotic closed form eta* = e^{-2 Gamma_inf} a_B^2 (P dC/da_B)^2, where
C(a_B) is the coefficient of the linear-in-t term of the phase factor.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dynamics import (gamma_bec, gamma_bec_stationary, phi_bec)
from .quadrature import (DEFAULT_MAX_EVALS, DEFAULT_REL_TOL, integrate_adaptive,
                         integrate_on_edges, oscillation_edges, refine_edges)
from .reservoirs import (BecReservoirModel, DerivedBecQuantities, derive_quantities)

__all__ = [
    "EncodingDerivatives",
    "EstimationReport",
    "EtaStarEstimate",
    "PlateauError",
    "qfi_from_bloch",
    "qfi_dephasing",
    "bloch_pair",
    "fisher_of_measurement",
    "optimal_angle",
    "measurement_axis",
    "qsnr",
    "relative_error",
    "eta",
    "eta_star",
    "derivative_wrt_param",
    "phi_linear_coeff",
    "encoding_derivatives",
    "estimation_report",
    "estimate_at",
    "gamma_saturation_time",
    "REPORT_CSV_COLUMNS",
    "FUNCTIONALS",
]

_PURE_TOL = 1e-12

REPORT_CSV_COLUMNS = (
    "t_s", "aB_m", "chi", "gamma", "dgamma", "phi_rad", "dphi",
    "F_par", "F_perp", "F_Q", "Q_par", "Q_perp", "Q",
    "phi_opt_rad", "rel_error_min", "nu",
)

FUNCTIONALS = ("gamma", "phi", "gamma_stationary", "phi_linear_coeff")


@dataclass(frozen=True)
class EncodingDerivatives:
    """(Gamma, dGamma, Phi, dPhi) with respect to one estimated parameter."""

    gamma: float
    dgamma: float
    phi: float
    dphi: float
    lambda_value: float

    def __post_init__(self):
        vals = (self.gamma, self.dgamma, self.phi, self.dphi, self.lambda_value)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"encoding derivatives must be finite, got {vals!r}")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")


@dataclass(frozen=True)
class EstimationReport:
    """QFI decomposition, QSNRs, optimal angle and error bound for nu shots."""

    F_par: float
    F_perp: float
    F_Q: float
    Q_par: float
    Q_perp: float
    Q: float
    phi_opt: float
    rel_error_min: float
    nu: int


def qfi_from_bloch(w, dw) -> float:
    """QFI from a Bloch vector and its parameter derivative."""
    w = np.asarray(w, dtype=float)
    dw = np.asarray(dw, dtype=float)
    wlen = float(np.linalg.norm(w))
    if wlen > 1.0 + _PURE_TOL:
        raise ValueError(f"Bloch vector length {wlen!r} exceeds 1")
    jump = float(dw @ dw)
    if wlen >= 1.0 - _PURE_TOL:
        return jump
    radial = float(w @ dw)
    return jump + radial * radial / (1.0 - wlen * wlen)


def qfi_dephasing(d: EncodingDerivatives) -> tuple[float, float, float]:
    """(F_par, F_perp, F_Q) of the dephasing channel.

    At Gamma = 0 a nonzero dGamma is inconsistent (a pure-state family
    cannot have a radial derivative), so it raises rather than guessing a
    limit; with dGamma = 0 the decay part is exactly 0.
    """
    if d.gamma == 0.0:
        if d.dgamma != 0.0:
            raise ValueError("pure-state decay derivative inconsistent: "
                             "gamma = 0 requires dgamma = 0")
        f_par = 0.0
    else:
        f_par = d.dgamma ** 2 / math.expm1(2.0 * d.gamma)
    f_perp = math.exp(-2.0 * d.gamma) * d.dphi ** 2
    return f_par, f_perp, f_par + f_perp


def bloch_pair(d: EncodingDerivatives) -> tuple[np.ndarray, np.ndarray]:
    """Bloch vector and its derivative for the dephasing channel."""
    w = math.exp(-d.gamma)
    c, s = math.cos(d.phi), math.sin(d.phi)
    bloch = np.array([w * c, w * s, 0.0])
    dbloch = np.array([-w * (d.dgamma * c + d.dphi * s),
                       w * (-d.dgamma * s + d.dphi * c),
                       0.0])
    return bloch, dbloch


def fisher_of_measurement(state, dstate, axis) -> float:
    """Fisher information of the two-outcome observable axis . sigma.

    state may be a QubitState or a Bloch 3-vector; dstate is the Bloch
    derivative.  The derivative of <X> is taken holding the axis fixed.
    """
    w = np.asarray(getattr(state, "bloch", state), dtype=float)
    dw = np.asarray(dstate, dtype=float)
    axis = np.asarray(axis, dtype=float)
    norm = float(np.linalg.norm(axis))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"measurement axis must be unit length, |axis| = {norm!r}")
    mean = float(axis @ w)
    var = 1.0 - mean * mean
    if var <= 0.0:
        raise ValueError("axis aligned with a pure-state Bloch vector: zero variance")
    dmean = float(axis @ dw)
    return dmean * dmean / var


def measurement_axis(phi: float, angle: float = 0.0) -> np.ndarray:
    """Equatorial axis of cos(angle) sigma_par + sin(angle) sigma_perp.

    sigma_par points along the state direction (cos phi, sin phi, 0);
    sigma_perp is its in-plane normal.
    """
    return np.array([math.cos(phi + angle), math.sin(phi + angle), 0.0])


def optimal_angle(d: EncodingDerivatives) -> float:
    """Rotation angle (from sigma_par toward sigma_perp) saturating the QFI.

    tan(angle) = w (1 - w^2) dPhi / dw_len with w = e^-Gamma and
    dw_len = -w dGamma; atan2 fixes the quadrant (the angle is only defined
    mod pi, and both representatives give the same Fisher information).
    """
    w = math.exp(-d.gamma)
    num = w * (1.0 - w * w) * d.dphi
    den = -w * d.dgamma
    if num == 0.0 and den == 0.0:
        if d.dphi != 0.0:
            # pure state: only the phase quadrature carries information
            return math.copysign(math.pi / 2.0, d.dphi)
        raise ValueError("parameter not encoded: both derivatives vanish")
    return math.atan2(num, den)


def qsnr(lambda_value: float, fisher: float) -> float:
    """Dimensionless signal-to-noise Q = lambda^2 F."""
    if lambda_value == 0.0:
        raise ValueError("lambda must be nonzero for a relative measure")
    return lambda_value ** 2 * fisher


def relative_error(q: float, nu: int = 1) -> float:
    """Optimal relative error 1/sqrt(nu Q); inf marker when Q = 0."""
    if not (isinstance(nu, (int, np.integer)) and nu >= 1):
        raise ValueError(f"nu must be a positive integer, got {nu!r}")
    if q < 0:
        raise ValueError("QSNR must be >= 0")
    if q == 0.0:
        return math.inf
    return 1.0 / math.sqrt(nu * q)


def eta(q_perp: float, chi: float, t: float) -> float:
    """Phase-channel figure of merit Q_perp / (chi t)^2."""
    if chi == 0.0:
        raise ValueError("chi must be nonzero")
    if not t > 0:
        raise ValueError("t must be > 0")
    return q_perp / (chi * t) ** 2


# ---------------------------------------------------------------------------
# derivatives with respect to the condensate scattering length
# ---------------------------------------------------------------------------

def _deriv_args(model, derived):
    if derived is None:
        derived = derive_quantities(model)
    return derived, derived.P, derived.alpha, derived.s, model.ell_A, model.k_max


def _analytic_derivative(functional, model, derived, t, rel_tol, max_evals):
    derived, pref, alpha, s, ell, k_max = _deriv_args(model, derived)
    a_b = model.a_B
    if functional in ("gamma", "phi"):
        kern = kernels.dkernel_gamma if functional == "gamma" else kernels.dkernel_phi

        def f(k, tt):
            return kern(k, tt, pref, alpha, s, ell, a_b)

        edges = oscillation_edges(
            t, k_max,
            omega=lambda k: kernels.dispersion(np.asarray(k, dtype=float), alpha, s),
            omega_inverse=lambda w: kernels.dispersion_inverse(np.asarray(w, dtype=float), alpha, s))
        res, _ = refine_edges(lambda k: f(k, t), edges, rel_tol=rel_tol, max_evals=max_evals)
        value = res.value
        return derived.chi * value if functional == "phi" else value
    if functional == "gamma_stationary":
        return integrate_adaptive(
            lambda k: kernels.dkernel_gamma_stationary(k, pref, alpha, s, ell, a_b),
            0.0, k_max, rel_tol=rel_tol, max_evals=max_evals).value
    if functional == "phi_linear_coeff":
        return integrate_adaptive(
            lambda k: kernels.dkernel_phi_linear(k, alpha, s, ell, a_b),
            0.0, k_max, rel_tol=rel_tol, max_evals=max_evals).value
    raise ValueError(f"unknown functional {functional!r}; expected one of {FUNCTIONALS}")


def _functional_on_edges(functional, model, derived, t, edges):
    """Evaluate one functional on a fixed mesh (for shared-mesh differences)."""
    derived, pref, alpha, s, ell, _ = _deriv_args(model, derived)
    if functional == "gamma":
        f = lambda k: kernels.kernel_gamma(k, t, pref, alpha, s, ell)
    elif functional == "phi":
        f = lambda k: derived.chi * kernels.kernel_phi(k, t, pref, alpha, s, ell)
    elif functional == "gamma_stationary":
        f = lambda k: kernels.kernel_gamma_stationary(k, pref, alpha, s, ell)
    elif functional == "phi_linear_coeff":
        f = lambda k: kernels.kernel_phi_linear(k, alpha, s, ell)
    else:
        raise ValueError(f"unknown functional {functional!r}; expected one of {FUNCTIONALS}")
    return integrate_on_edges(f, edges).value


def _fd_derivative(functional, model, derived, t, rel_tol, max_evals, rel_step):
    """Central difference + one Richardson pass on a shared quadrature mesh.

    The mesh is refined once for the base parameter and reused verbatim for
    every shifted evaluation, so quadrature error cancels in the
    differences instead of being amplified by 1/h.
    """
    derived, pref, alpha, s, ell, k_max = _deriv_args(model, derived)
    a_b = model.a_B
    h = rel_step * abs(a_b)
    if h == 0.0 or a_b + h == a_b or a_b - h == a_b:
        raise ValueError(f"finite-difference step underflow at a_B = {a_b!r}")

    if functional in ("gamma", "phi"):
        edges = oscillation_edges(
            t, k_max,
            omega=lambda k: kernels.dispersion(np.asarray(k, dtype=float), alpha, s),
            omega_inverse=lambda w: kernels.dispersion_inverse(np.asarray(w, dtype=float), alpha, s))
        base = kernels.kernel_gamma if functional == "gamma" else kernels.kernel_phi
        _, edges = refine_edges(lambda k: base(k, t, pref, alpha, s, ell), edges,
                                rel_tol=rel_tol, max_evals=max_evals)
    else:
        kern = (kernels.kernel_gamma_stationary if functional == "gamma_stationary"
                else kernels.kernel_phi_linear)
        if functional == "gamma_stationary":
            _, edges = refine_edges(lambda k: kern(k, pref, alpha, s, ell),
                                    np.array([0.0, k_max]), rel_tol=rel_tol,
                                    max_evals=max_evals)
        else:
            _, edges = refine_edges(lambda k: kern(k, alpha, s, ell),
                                    np.array([0.0, k_max]), rel_tol=rel_tol,
                                    max_evals=max_evals)

    def value_at(a):
        shifted = model.with_a_b(a)
        return _functional_on_edges(functional, shifted, None, t, edges)

    def central(step):
        return (value_at(a_b + step) - value_at(a_b - step)) / (2.0 * step)

    d_h = central(h)
    d_h2 = central(h / 2.0)
    return (4.0 * d_h2 - d_h) / 3.0


def derivative_wrt_param(functional: str, model: BecReservoirModel,
                         t: float | None = None, method: str = "analytic",
                         derived: DerivedBecQuantities | None = None,
                         rel_tol: float = DEFAULT_REL_TOL,
                         max_evals: int = DEFAULT_MAX_EVALS,
                         rel_step: float = 1e-5) -> float:
    """d(functional)/d(a_B) for gamma, phi, gamma_stationary or phi_linear_coeff.

    'analytic' differentiates the integrand under the integral sign using
    dw/da_B = e s / (w a_B); 'finite_difference' uses shared-mesh central
    differences with one Richardson extrapolation.  Both agree to ~1e-6
    relative on smooth points.
    """
    if functional in ("gamma", "phi"):
        if t is None:
            raise ValueError(f"functional {functional!r} needs a time t")
        if t < 0:
            raise ValueError("t must be >= 0")
    if method == "analytic":
        return _analytic_derivative(functional, model, derived, t, rel_tol, max_evals)
    if method == "finite_difference":
        return _fd_derivative(functional, model, derived, t, rel_tol, max_evals, rel_step)
    raise ValueError(f"unknown method {method!r}; expected 'analytic' or 'finite_difference'")


def phi_linear_coeff(model: BecReservoirModel,
                     derived: DerivedBecQuantities | None = None,
                     rel_tol: float = DEFAULT_REL_TOL,
                     max_evals: int = DEFAULT_MAX_EVALS) -> float:
    """Coefficient C of the secular phase Phi ~ -chi P C t (s/m^3)."""
    derived, pref, alpha, s, ell, k_max = _deriv_args(model, derived)
    return integrate_adaptive(lambda k: kernels.kernel_phi_linear(k, alpha, s, ell),
                              0.0, k_max, rel_tol=rel_tol, max_evals=max_evals).value


def encoding_derivatives(model: BecReservoirModel, t: float,
                         derived: DerivedBecQuantities | None = None,
                         method: str = "analytic",
                         rel_tol: float = DEFAULT_REL_TOL,
                         max_evals: int = DEFAULT_MAX_EVALS) -> EncodingDerivatives:
    """Bundle (Gamma, dGamma, Phi, dPhi) at time t for lambda = a_B."""
    if derived is None:
        derived = derive_quantities(model)
    return EncodingDerivatives(
        gamma=gamma_bec(model, t, derived, rel_tol, max_evals),
        dgamma=derivative_wrt_param("gamma", model, t, method, derived, rel_tol, max_evals),
        phi=phi_bec(model, t, derived, rel_tol, max_evals),
        dphi=derivative_wrt_param("phi", model, t, method, derived, rel_tol, max_evals),
        lambda_value=model.a_B)


def estimation_report(d: EncodingDerivatives, nu: int = 1) -> EstimationReport:
    """Full estimation summary from an encoding-derivative bundle."""
    f_par, f_perp, f_q = qfi_dephasing(d)
    lam = d.lambda_value
    q_par = qsnr(lam, f_par)
    q_perp = qsnr(lam, f_perp)
    q = qsnr(lam, f_q)
    return EstimationReport(F_par=f_par, F_perp=f_perp, F_Q=f_q,
                            Q_par=q_par, Q_perp=q_perp, Q=q,
                            phi_opt=optimal_angle(d),
                            rel_error_min=relative_error(q, nu), nu=nu)


def estimate_at(model: BecReservoirModel, t: float, nu: int = 1,
                derived: DerivedBecQuantities | None = None,
                rel_tol: float = DEFAULT_REL_TOL,
                max_evals: int = DEFAULT_MAX_EVALS) -> tuple[EncodingDerivatives, EstimationReport]:
    """Encoding derivatives and estimation report for lambda = a_B at time t."""
    d = encoding_derivatives(model, t, derived, "analytic", rel_tol, max_evals)
    return d, estimation_report(d, nu)


# ---------------------------------------------------------------------------
# late-time plateau of the phase channel
# ---------------------------------------------------------------------------

class PlateauError(RuntimeError):
    """The eta(t) plateau was not reached within the allotted time window."""


@dataclass(frozen=True)
class EtaStarEstimate:
    """Dual determination of the late-time plateau of eta = Q_perp/(chi t)^2.

    plateau: constant of a least-squares fit eta(t) = eta* + b/t^2 over the
    sampling window; asymptotic: e^{-2 Gamma_inf} a_B^2 (P dC/da_B)^2.
    window records the sampled time range (the plateau is declared only
    once the raw samples vary by less than max_rel_variation).
    """

    plateau: float
    asymptotic: float
    window: tuple[float, float]
    rel_variation: float
    times: tuple[float, ...]
    samples: tuple[float, ...]

    @property
    def value(self) -> float:
        return self.plateau


def gamma_saturation_time(model: BecReservoirModel,
                          derived: DerivedBecQuantities | None = None,
                          rel_dev: float = 0.01,
                          rel_tol: float = DEFAULT_REL_TOL,
                          max_evals: int = DEFAULT_MAX_EVALS) -> float:
    """Smallest probed time with |Gamma(t) - Gamma_inf| / Gamma_inf < rel_dev.

    Gamma relaxes to its stationary value like 1/t^2 with an oscillatory
    overlay, so the probe demands the deviation stays small at all later
    probe points as well.
    """
    if derived is None:
        derived = derive_quantities(model)
    g_inf = gamma_bec_stationary(model, derived, rel_tol, max_evals)
    probes = np.geomspace(1.0 / derived.s, 400.0 / derived.s, 14)
    devs = np.array([abs(gamma_bec(model, t, derived, rel_tol, max_evals) - g_inf) / g_inf
                     for t in probes])
    ok = devs < rel_dev
    for i in range(ok.size):
        if ok[i:].all():
            return float(probes[i])
    raise PlateauError(
        f"decay factor not within {rel_dev:.0%} of stationary by t = {probes[-1]:.3e} s "
        f"(last relative deviation {devs[-1]:.3e})")


def eta_star(model: BecReservoirModel,
             derived: DerivedBecQuantities | None = None,
             n_samples: int = 9,
             max_rel_variation: float = 0.01,
             max_window_growth: int = 4,
             rel_tol: float = DEFAULT_REL_TOL,
             max_evals: int = DEFAULT_MAX_EVALS) -> EtaStarEstimate:
    """Late-time plateau of eta for lambda = a_B, computed two ways.

    The sampling window starts at [t_sat, 10 t_sat], where t_sat is the 1%
    saturation time of the decay factor, and is doubled (up to
    max_window_growth times) until the raw eta samples vary by less than
    max_rel_variation.  The plateau fit and the asymptotic closed form must
    agree to 1%; a larger gap means the quadrature or window failed, so it
    raises rather than returning a silently inconsistent pair.
    """
    if derived is None:
        derived = derive_quantities(model)
    chi = derived.chi
    if chi == 0.0:
        raise ValueError("chi = 0: no phase channel, eta undefined")

    g_inf = gamma_bec_stationary(model, derived, rel_tol, max_evals)
    dc = derivative_wrt_param("phi_linear_coeff", model, None, "analytic",
                              derived, rel_tol, max_evals)
    asymptotic = math.exp(-2.0 * g_inf) * (model.a_B * derived.P * dc) ** 2

    t_sat = gamma_saturation_time(model, derived, 0.01, rel_tol, max_evals)
    window = (t_sat, 10.0 * t_sat)
    last_var = math.inf
    for _ in range(max_window_growth + 1):
        times = np.geomspace(window[0], window[1], n_samples)
        vals = []
        for t in times:
            g = gamma_bec(model, t, derived, rel_tol, max_evals)
            dphi = derivative_wrt_param("phi", model, t, "analytic",
                                        derived, rel_tol, max_evals)
            q_perp = qsnr(model.a_B, math.exp(-2.0 * g) * dphi * dphi)
            vals.append(eta(q_perp, chi, t))
        vals = np.asarray(vals)
        last_var = float((vals.max() - vals.min()) / vals.mean())
        if last_var < max_rel_variation:
            break
        window = (2.0 * window[0], 2.0 * window[1])
    else:
        raise PlateauError(
            f"eta(t) plateau not reached by t = {window[1]:.3e} s "
            f"(last relative variation {last_var:.3e})")

    # fit eta(t) = eta* + b / t^2 (the known approach law)
    design = np.column_stack([np.ones_like(times), times ** -2.0])
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    plateau = float(coef[0])

    gap = abs(plateau - asymptotic) / abs(asymptotic)
    if gap > 0.01:
        raise PlateauError(
            f"plateau fit {plateau!r} and asymptotic value {asymptotic!r} "
            f"disagree by {gap:.3%}")
    return EtaStarEstimate(plateau=plateau, asymptotic=asymptotic,
                           window=(float(times[0]), float(times[-1])),
                           rel_variation=last_var,
                           times=tuple(float(t) for t in times),
                           samples=tuple(float(v) for v in vals))
