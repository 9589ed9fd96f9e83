"""Array kernels for the zero-temperature BEC continuum integrals.

Everything here works in angular-frequency units (rad/s): with
e(k) = alpha*k^2 the free-particle term and s = n*g_B/hbar the interaction
scale, the Bogoliubov branch is w(k) = sqrt(e*(e+2s)).  The decay-factor
integrand, the phase-factor integrand, their long-time limits and their
derivatives with respect to the condensate scattering length a_B are all
expressed through trigonometric ratio helpers that stay accurate at small
phase x = w*t, where the naive expressions lose all digits to cancellation.

Forms used (G = exp(-k^2 ell^2 / 2) is the probe envelope, pref = P):

    decay integrand       pref * k^3 * sqrt(alpha/(e+2s)) * t^2 * cc(wt) * G
    phase integrand       pref * k^3 * sqrt(alpha/(e+2s)) * t^2 * sd(wt) * G
    stationary decay      pref * k / sqrt(alpha) / (e+2s)^{3/2} * G
    phase linear coeff    k^2 / (e+2s) * G     (integrand of C; phase ~ -chi*P*C*t)

with cc(x) = (1-cos x)/x^2 and sd(x) = (sin x - x)/x^2.  The powers of k
cancel every would-be 0/0 at k -> 0 algebraically, so the kernels are
finite and smooth on the whole domain including k = 0.  The a_B
derivatives enter through dw/da_B = e*s/(w*a_B) and collapse to

    d(decay)/da_B  = pref k^2 G s t [sin x - 3 x cc(x)] / (a_B (e+2s)^2)
    d(phase)/da_B  = pref k^2 G s t [(cos x - 1) - 3 x sd(x)] / (a_B (e+2s)^2)

whose brackets get their own series-protected helpers.

The whole family is built once per backend (see backend.py); the
plain-numpy twins stay importable through NUMPY_IMPLS.
"""

import numpy as np

from . import backend

KERNEL_NAMES = (
    "cosm1_ratio", "sinm_ratio", "dgamma_bracket", "dphi_bracket",
    "dispersion", "dispersion_inverse",
    "kernel_gamma", "kernel_phi", "kernel_gamma_stationary", "kernel_phi_linear",
    "dkernel_gamma", "dkernel_phi", "dkernel_gamma_stationary", "dkernel_phi_linear",
)


def build_kernels(compile_fn):
    """Build the kernel family, running every function through compile_fn."""

    def cosm1_ratio(x):
        # (1 - cos x) / x^2, series below |x| = 0.1 against cancellation
        small = np.abs(x) < 0.1
        xs = np.where(small, x, 1.0)
        x2 = xs * xs
        series = 0.5 - x2 / 24.0 + x2 * x2 / 720.0 - x2 * x2 * x2 / 40320.0
        xd = np.where(small, 1.0, x)
        direct = (1.0 - np.cos(x)) / (xd * xd)
        return np.where(small, series, direct)

    def sinm_ratio(x):
        # (sin x - x) / x^2, series below |x| = 0.1
        small = np.abs(x) < 0.1
        xs = np.where(small, x, 1.0)
        x2 = xs * xs
        series = xs * (-1.0 / 6.0 + x2 / 120.0 - x2 * x2 / 5040.0
                       + x2 * x2 * x2 / 362880.0)
        xd = np.where(small, 1.0, x)
        direct = (np.sin(x) - x) / (xd * xd)
        return np.where(small, series, direct)

    cosm1_ratio = compile_fn(cosm1_ratio)
    sinm_ratio = compile_fn(sinm_ratio)

    def dgamma_bracket(x):
        # sin x - 3 x cc(x); leading term -x/2, no further protection needed
        return np.sin(x) - 3.0 * x * cosm1_ratio(x)

    def dphi_bracket(x):
        # (cos x - 1) - 3 x sd(x); the x^2 terms cancel, series below 0.35:
        # sum_{n>=2} (-1)^n (2n-2) x^{2n} / (2n+1)!
        small = np.abs(x) < 0.35
        xs = np.where(small, x, 1.0)
        x2 = xs * xs
        x4 = x2 * x2
        series = x4 * (1.0 / 60.0 - x2 / 1260.0 + x4 / 60480.0
                       - x4 * x2 / 4989600.0)
        direct = (np.cos(x) - 1.0) - 3.0 * x * sinm_ratio(x)
        return np.where(small, series, direct)

    def dispersion(k, alpha, s):
        # Bogoliubov branch w(k) = sqrt(e(e+2s)), e = alpha k^2, rad/s
        e = alpha * k * k
        return np.sqrt(e * (e + 2.0 * s))

    def dispersion_inverse(w, alpha, s):
        # k(w); e = -s + sqrt(s^2+w^2) rewritten to survive w << s
        e = w * w / (s + np.sqrt(s * s + w * w))
        return np.sqrt(e / alpha)

    def kernel_gamma(k, t, pref, alpha, s, ell):
        e = alpha * k * k
        x = np.sqrt(e * (e + 2.0 * s)) * t
        env = np.exp(-0.5 * (k * ell) ** 2)
        return pref * k ** 3 * np.sqrt(alpha / (e + 2.0 * s)) * t * t * cosm1_ratio(x) * env

    def kernel_phi(k, t, pref, alpha, s, ell):
        e = alpha * k * k
        x = np.sqrt(e * (e + 2.0 * s)) * t
        env = np.exp(-0.5 * (k * ell) ** 2)
        return pref * k ** 3 * np.sqrt(alpha / (e + 2.0 * s)) * t * t * sinm_ratio(x) * env

    def kernel_gamma_stationary(k, pref, alpha, s, ell):
        e = alpha * k * k
        env = np.exp(-0.5 * (k * ell) ** 2)
        return pref * k / np.sqrt(alpha) / (e + 2.0 * s) ** 1.5 * env

    def kernel_phi_linear(k, alpha, s, ell):
        e = alpha * k * k
        env = np.exp(-0.5 * (k * ell) ** 2)
        return k * k / (e + 2.0 * s) * env

    dgamma_bracket = compile_fn(dgamma_bracket)
    dphi_bracket = compile_fn(dphi_bracket)

    def dkernel_gamma(k, t, pref, alpha, s, ell, a_b):
        e = alpha * k * k
        d = e + 2.0 * s
        x = np.sqrt(e * d) * t
        env = np.exp(-0.5 * (k * ell) ** 2)
        return pref * k * k * env * s * t * dgamma_bracket(x) / (a_b * d * d)

    def dkernel_phi(k, t, pref, alpha, s, ell, a_b):
        e = alpha * k * k
        d = e + 2.0 * s
        x = np.sqrt(e * d) * t
        env = np.exp(-0.5 * (k * ell) ** 2)
        return pref * k * k * env * s * t * dphi_bracket(x) / (a_b * d * d)

    def dkernel_gamma_stationary(k, pref, alpha, s, ell, a_b):
        e = alpha * k * k
        d = e + 2.0 * s
        env = np.exp(-0.5 * (k * ell) ** 2)
        return -3.0 * pref * k / np.sqrt(alpha) * s / (a_b * d ** 2.5) * env

    def dkernel_phi_linear(k, alpha, s, ell, a_b):
        e = alpha * k * k
        d = e + 2.0 * s
        env = np.exp(-0.5 * (k * ell) ** 2)
        return -2.0 * s / a_b * k * k / (d * d) * env

    built = {
        "cosm1_ratio": cosm1_ratio,
        "sinm_ratio": sinm_ratio,
        "dgamma_bracket": dgamma_bracket,
        "dphi_bracket": dphi_bracket,
        "dispersion": compile_fn(dispersion),
        "dispersion_inverse": compile_fn(dispersion_inverse),
        "kernel_gamma": compile_fn(kernel_gamma),
        "kernel_phi": compile_fn(kernel_phi),
        "kernel_gamma_stationary": compile_fn(kernel_gamma_stationary),
        "kernel_phi_linear": compile_fn(kernel_phi_linear),
        "dkernel_gamma": compile_fn(dkernel_gamma),
        "dkernel_phi": compile_fn(dkernel_phi),
        "dkernel_gamma_stationary": compile_fn(dkernel_gamma_stationary),
        "dkernel_phi_linear": compile_fn(dkernel_phi_linear),
    }
    assert set(built) == set(KERNEL_NAMES)
    return built


NUMPY_IMPLS = build_kernels(lambda fn: fn)

if backend.ACTIVE == "numba":
    ACTIVE_IMPLS = build_kernels(lambda fn: backend.compile_with(fn, "numba"))
else:
    ACTIVE_IMPLS = NUMPY_IMPLS

cosm1_ratio = ACTIVE_IMPLS["cosm1_ratio"]
sinm_ratio = ACTIVE_IMPLS["sinm_ratio"]
dgamma_bracket = ACTIVE_IMPLS["dgamma_bracket"]
dphi_bracket = ACTIVE_IMPLS["dphi_bracket"]
dispersion = ACTIVE_IMPLS["dispersion"]
dispersion_inverse = ACTIVE_IMPLS["dispersion_inverse"]
kernel_gamma = ACTIVE_IMPLS["kernel_gamma"]
kernel_phi = ACTIVE_IMPLS["kernel_phi"]
kernel_gamma_stationary = ACTIVE_IMPLS["kernel_gamma_stationary"]
kernel_phi_linear = ACTIVE_IMPLS["kernel_phi_linear"]
dkernel_gamma = ACTIVE_IMPLS["dkernel_gamma"]
dkernel_phi = ACTIVE_IMPLS["dkernel_phi"]
dkernel_gamma_stationary = ACTIVE_IMPLS["dkernel_gamma_stationary"]
dkernel_phi_linear = ACTIVE_IMPLS["dkernel_phi_linear"]

_BY_BACKEND = {"numpy": NUMPY_IMPLS}
if backend.ACTIVE == "numba":
    _BY_BACKEND["numba"] = ACTIVE_IMPLS


def implementations(name: str) -> dict:
    """Map backend name -> implementation of a kernel, for tests and benchmarks."""
    if name not in KERNEL_NAMES:
        raise KeyError(f"unknown kernel {name!r}")
    if "numba" not in _BY_BACKEND and backend.NUMBA_AVAILABLE:
        _BY_BACKEND["numba"] = build_kernels(lambda fn: backend.compile_with(fn, "numba"))
    return {b: impls[name] for b, impls in _BY_BACKEND.items()}
