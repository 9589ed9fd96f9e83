"""Scenario configs: JSON with unit-suffixed keys, strict validation.

A scenario file looks like

    {
      "kind": "fig1",
      "model": {"density_m3": 1e20, "species_A": "Na23", "species_B": "Rb87",
                "ell_A_m": 45e-9, "a0_m": 0.0, "a1_m": 2.9e-9,
                "aB_m": 5.3e-9, "OmegaA_rad_s": 0.0},
      "time_grid": {"t_min_s": 0.0, "t_max_s": 5e-3, "points": 500,
                    "spacing": "linear"},
      "aB_m": [2.65e-9, 5.3e-9, 1.06e-8],
      "chi": 1.0,
      "nu": 1,
      "out_dir": "out"
    }

Every level rejects unknown keys.  Defaults (documented below per kind)
fill everything except the kind.  `chi` overrides the coupling ratio by
rescaling (a0, a1) at fixed a1 - a0.  The `discrete` kind replaces `model`
with `modes` (per-mode {omega_rad_s, g_rad_s, xi_rad_s}, values either a
number or an [re, im] pair), plus optional beta_1_per_rad_s, omega0_rad_s
and frame.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import FRAME_LAB, FRAME_ROTATING
from .reservoirs import (MODEL_KEYS, BecReservoirModel, DerivedBecQuantities,
                         DiscreteMode, DiscreteReservoir, ModelValidationError,
                         build_bec_model, derive_quantities, paper_parameter_map)

__all__ = ["Scenario", "ConfigError", "validate_config", "scenario_from_dict",
           "SCENARIO_KINDS", "A_RB"]

A_RB = 5.3e-9  # Rb-Rb background scattering length, the reference unit for a_B

SCENARIO_KINDS = ("fig1", "fig2", "fig3", "fig4", "sweep", "discrete", "oracle-suite")

_SCENARIO_KEYS = {"kind", "model", "time_grid", "aB_m", "chi", "nu", "out_dir",
                  "seed", "modes", "beta_1_per_rad_s", "omega0_rad_s", "frame",
                  "aB_grid"}
_TIME_GRID_KEYS = {"t_min_s", "t_max_s", "points", "spacing"}
_MODE_KEYS = {"omega_rad_s", "g_rad_s", "xi_rad_s"}
_GRID_KEYS = {"from_m", "to_m", "points"}

_DEFAULT_AB_MULTIPLES = (0.5, 1.0, 2.0)


class ConfigError(ValueError):
    """Invalid scenario configuration; message names the offending key."""


@dataclass(frozen=True)
class Scenario:
    """Normalized scenario: validated model(s), SI time grid, output target."""

    kind: str
    model: BecReservoirModel | None
    derived: DerivedBecQuantities | None
    times: np.ndarray | None
    a_b_values: tuple[float, ...]
    chi: float
    nu: int
    out_dir: str
    seed: int
    reservoir: DiscreteReservoir | None
    omega0: float
    frame: str
    effective: dict

    def __post_init__(self):
        if self.times is not None:
            t = np.asarray(self.times, dtype=float)
            t.setflags(write=False)
            object.__setattr__(self, "times", t)
            if t.size and np.any(np.diff(t) <= 0):
                raise ConfigError("time grid must be strictly increasing")


def _require_keys(mapping, allowed, where):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def _time_grid(spec, kind):
    defaults = {
        "fig1": {"t_min_s": 0.0, "t_max_s": 5e-3, "points": 500, "spacing": "linear"},
        "fig2": {"t_min_s": 1e-4, "t_max_s": 5e-3, "points": 120, "spacing": "log"},
        "fig3": {"t_min_s": 1e-4, "t_max_s": 2e-2, "points": 60, "spacing": "log"},
        "sweep": {"t_min_s": 1e-3, "t_max_s": 1e-3, "points": 1, "spacing": "linear"},
        "discrete": {"t_min_s": 0.0, "t_max_s": 10.0, "points": 200, "spacing": "linear"},
    }.get(kind)
    if defaults is None:
        return None, None
    grid = dict(defaults)
    if spec is not None:
        _require_keys(spec, _TIME_GRID_KEYS, "time_grid")
        grid.update(spec)
    points = grid["points"]
    if not (isinstance(points, int) and points >= 1):
        raise ConfigError(f"time_grid.points must be a positive integer, got {points!r}")
    t0, t1 = float(grid["t_min_s"]), float(grid["t_max_s"])
    if grid["spacing"] == "linear":
        times = np.linspace(t0, t1, points)
    elif grid["spacing"] == "log":
        if t0 <= 0:
            raise ConfigError("log spacing needs t_min_s > 0")
        times = np.geomspace(t0, t1, points)
    else:
        raise ConfigError(f"time_grid.spacing must be 'linear' or 'log', "
                          f"got {grid['spacing']!r}")
    if points > 1 and not t1 > t0:
        raise ConfigError("time_grid needs t_max_s > t_min_s")
    return times, grid


def _complex_from(value, key):
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) for v in value)):
        return complex(value[0], value[1])
    raise ConfigError(f"{key} must be a number or an [re, im] pair, got {value!r}")


def scenario_from_dict(raw: dict, default_out: str = "out") -> Scenario:
    """Validate a raw config mapping into a normalized Scenario."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _require_keys(raw, _SCENARIO_KEYS, "scenario")
    kind = raw.get("kind")
    if kind not in SCENARIO_KINDS:
        raise ConfigError(f"kind must be one of {SCENARIO_KINDS}, got {kind!r}")

    nu = raw.get("nu", 1)
    if not (isinstance(nu, int) and nu >= 1):
        raise ConfigError(f"nu must be a positive integer, got {nu!r}")
    seed = raw.get("seed", 7)
    if not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    out_dir = raw.get("out_dir", default_out)

    effective = {"kind": kind, "nu": nu, "out_dir": out_dir}

    if kind == "discrete":
        modes_spec = raw.get("modes")
        if not modes_spec:
            raise ConfigError("discrete scenario needs a nonempty 'modes' list")
        modes = []
        for i, m in enumerate(modes_spec):
            _require_keys(m, _MODE_KEYS, f"modes[{i}]")
            if "omega_rad_s" not in m or "g_rad_s" not in m:
                raise ConfigError(f"modes[{i}] needs omega_rad_s and g_rad_s")
            modes.append(DiscreteMode(
                omega=float(m["omega_rad_s"]),
                g=_complex_from(m["g_rad_s"], f"modes[{i}].g_rad_s"),
                xi=_complex_from(m.get("xi_rad_s", 0.0), f"modes[{i}].xi_rad_s")))
        beta = raw.get("beta_1_per_rad_s", math.inf)
        reservoir = DiscreteReservoir(modes=tuple(modes), beta=float(beta))
        frame = raw.get("frame", FRAME_LAB)
        if frame not in (FRAME_LAB, FRAME_ROTATING):
            raise ConfigError(f"frame must be 'lab' or 'rotating', got {frame!r}")
        times, grid = _time_grid(raw.get("time_grid"), kind)
        omega0 = float(raw.get("omega0_rad_s", 0.0))
        effective.update({"modes": modes_spec, "beta_1_per_rad_s": beta,
                          "omega0_rad_s": omega0, "frame": frame, "time_grid": grid})
        return Scenario(kind=kind, model=None, derived=None, times=times,
                        a_b_values=(), chi=0.0, nu=nu, out_dir=out_dir, seed=seed,
                        reservoir=reservoir, omega0=omega0, frame=frame,
                        effective=effective)

    model_spec = dict(raw.get("model") or paper_parameter_map())
    _require_keys(model_spec, MODEL_KEYS, "model")
    try:
        model, derived = build_bec_model(model_spec)
    except ModelValidationError as exc:
        raise ConfigError(f"model: {exc}") from exc

    chi = raw.get("chi")
    if chi is not None:
        chi = float(chi)
        model = model.with_chi(chi)
        derived = derive_quantities(model)
    else:
        chi = derived.chi

    if kind == "fig4":
        grid_spec = dict(raw.get("aB_grid") or {})
        _require_keys(grid_spec, _GRID_KEYS, "aB_grid")
        lo = float(grid_spec.get("from_m", 0.3 * A_RB))
        hi = float(grid_spec.get("to_m", 2.5 * A_RB))
        pts = grid_spec.get("points", 10)
        if not (isinstance(pts, int) and pts >= 2):
            raise ConfigError(f"aB_grid.points must be an integer >= 2, got {pts!r}")
        a_b_values = tuple(np.linspace(lo, hi, pts))
        effective["aB_grid"] = {"from_m": lo, "to_m": hi, "points": pts}
        times = None
        grid = None
    else:
        a_b_values = tuple(float(v) for v in raw.get(
            "aB_m", [m * A_RB for m in _DEFAULT_AB_MULTIPLES]))
        if not a_b_values:
            raise ConfigError("aB_m must be a nonempty list")
        times, grid = _time_grid(raw.get("time_grid"), kind)

    # each a_B must itself produce a valid model (diluteness bound included)
    for a_b in a_b_values:
        try:
            model.with_a_b(a_b)
        except ModelValidationError as exc:
            raise ConfigError(f"aB_m = {a_b!r}: {exc}") from exc

    effective.update({
        "model": {k: (model_spec[k] if isinstance(model_spec[k], str) else float(model_spec[k]))
                  for k in model_spec},
        "chi": chi,
        "aB_m": [float(v) for v in a_b_values],
        "effective_a0_m": model.a0,
        "effective_a1_m": model.a1,
        "time_grid": grid,
        "seed": seed,
    })
    return Scenario(kind=kind, model=model, derived=derived, times=times,
                    a_b_values=a_b_values, chi=chi, nu=nu, out_dir=out_dir,
                    seed=seed, reservoir=None, omega0=derived.omega0,
                    frame=FRAME_ROTATING, effective=effective)


def validate_config(path: str, default_out: str = "out") -> Scenario:
    """Load + validate a JSON scenario file."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(raw, default_out=default_out)
