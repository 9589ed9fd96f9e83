"""Numerical backend selection for the hot integrand kernels.

The continuum integrals evaluate their integrands on meshes of 1e4..1e7
points; those array kernels are the only hot loops in the package.  They are
compiled with numba when it is available, with a pure-numpy fallback.

The env variable DEPHASING_PROBE_BACKEND forces the choice:

    auto    use numba when importable, numpy otherwise (default)
    numba   require numba, fail at import if missing
    numpy   pure numpy, never JIT

Both paths execute the same source, so results agree to floating-point
noise (no fastmath; see benchmarks/backend_bench.py for the speed gap).
"""

import os

ENV_VAR = "DEPHASING_PROBE_BACKEND"

_requested = os.environ.get(ENV_VAR, "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"{ENV_VAR}={_requested!r}: expected one of 'auto', 'numba', 'numpy'"
    )

if _requested == "numpy":
    _numba = None
else:
    try:
        import numba as _numba
    except ImportError:
        if _requested == "numba":
            raise
        _numba = None

ACTIVE = "numba" if _numba is not None else "numpy"


def _can_import_numba() -> bool:
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False


NUMBA_AVAILABLE = _numba is not None or _can_import_numba()


def compile_kernel(fn):
    """Return the accelerated version of an array kernel for the active backend."""
    if ACTIVE == "numba":
        return _numba.njit(cache=True, error_model="numpy")(fn)
    return fn


def compile_with(fn, backend: str):
    """Compile a kernel for an explicit backend ('numpy' or 'numba')."""
    if backend == "numpy":
        return fn
    if backend == "numba":
        import numba
        return numba.njit(cache=True, error_model="numpy")(fn)
    raise ValueError(f"unknown backend {backend!r}")
