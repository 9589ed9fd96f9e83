"""Scenario runner: turns a validated Scenario into CSV + JSON + SVG output.

Outputs are deterministic for identical configs (CSV floats use shortest
round-trip formatting; grids come from the config; the oracle suite is
seeded).  On failure every file created by the run is removed; a completed
run with failing oracle cases keeps its report and flags the failure in the
metadata instead.
"""

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, backend, svg
from .config import A_RB, Scenario
from .dynamics import bec_trajectory, discrete_trajectory
from .metrology import (REPORT_CSV_COLUMNS, encoding_derivatives, estimation_report,
                        eta, eta_star)
from .oracle import oracle_suite
from .quadrature import DEFAULT_REL_TOL
from .reservoirs import BecReservoirModel, derive_quantities

__all__ = ["run", "report_rows"]


def _report_row(model, derived, chi, t, nu, rel_tol):
    d = encoding_derivatives(model, t, derived, "analytic", rel_tol)
    rep = estimation_report(d, nu)
    return (t, model.a_B, chi, d.gamma, d.dgamma, d.phi, d.dphi,
            rep.F_par, rep.F_perp, rep.F_Q, rep.Q_par, rep.Q_perp, rep.Q,
            rep.phi_opt, rep.rel_error_min, nu)


def _report_chunk(args):
    raw_model, chi, times, nu, rel_tol = args
    model = BecReservoirModel(**raw_model)
    derived = derive_quantities(model)
    return [_report_row(model, derived, chi, t, nu, rel_tol) for t in times]


def report_rows(scenario: Scenario, rel_tol: float = DEFAULT_REL_TOL,
                jobs: int = 1) -> list[tuple]:
    """Metrology rows over the scenario's (a_B, t) grid, in grid order."""
    tasks = []
    for a_b in scenario.a_b_values:
        model = scenario.model.with_a_b(a_b)
        raw = {f: getattr(model, f) for f in
               ("n", "m_B", "m_A", "ell_A", "a0", "a1", "a_B", "Omega_A")}
        tasks.append((raw, scenario.chi, [float(t) for t in scenario.times],
                      scenario.nu, rel_tol))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_report_chunk, tasks))
    else:
        chunks = [_report_chunk(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def _write_report_csv(path, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(REPORT_CSV_COLUMNS) + "\n")
        for row in rows:
            *floats, nu = row
            fh.write(",".join(repr(float(v)) for v in floats) + f",{int(nu)}\n")


def _label(a_b: float) -> str:
    return f"aB={a_b * 1e9:.4g}nm"


class _RunOutputs:
    """Tracks created files so a failed run leaves nothing behind."""

    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.paths = []

    def path(self, name):
        os.makedirs(self.out_dir, exist_ok=True)
        p = os.path.join(self.out_dir, name)
        self.paths.append(p)
        return p

    def cleanup(self):
        for p in self.paths:
            try:
                os.unlink(p)
            except FileNotFoundError:
                pass


def run(scenario: Scenario, jobs: int = 1,
        rel_tol: float = DEFAULT_REL_TOL) -> tuple[list[str], dict]:
    """Execute a scenario; returns (files written, metadata)."""
    started = time.time()
    out = _RunOutputs(scenario.out_dir)
    meta = {
        "scenario": scenario.kind,
        "library_version": __version__,
        "backend": backend.ACTIVE,
        "rel_tol": rel_tol,
        "frame": scenario.frame,
        "jobs": jobs,
    }
    try:
        with open(out.path("config_echo.json"), "w") as fh:
            json.dump(scenario.effective, fh, indent=2, sort_keys=True)
            fh.write("\n")

        if scenario.kind == "fig1":
            _run_fig1(scenario, out, rel_tol)
        elif scenario.kind in ("fig2", "fig3", "sweep"):
            _run_report(scenario, out, rel_tol, jobs)
        elif scenario.kind == "fig4":
            _run_fig4(scenario, out, rel_tol, meta)
        elif scenario.kind == "discrete":
            _run_discrete(scenario, out)
        elif scenario.kind == "oracle-suite":
            _run_oracle(scenario, out, meta)
        else:  # pragma: no cover - kinds are validated upstream
            raise ValueError(f"unhandled scenario kind {scenario.kind!r}")

        meta["wall_clock_s"] = time.time() - started
        with open(out.path("metadata.json"), "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except BaseException:
        out.cleanup()
        raise
    return out.paths, meta


def _run_fig1(scenario, out, rel_tol):
    gamma_series, phi_series = [], []
    for a_b in scenario.a_b_values:
        model = scenario.model.with_a_b(a_b)
        traj = bec_trajectory(model, scenario.times, rel_tol=rel_tol)
        traj.to_csv(out.path(f"trajectory_{_label(a_b)}.csv"))
        gamma_series.append((_label(a_b), traj.times, traj.gamma))
        phi_series.append((_label(a_b), traj.times, np.abs(traj.phi)))
    svg.line_chart(gamma_series, out.path("fig1_gamma.svg"),
                   title="decay factor", xlabel="t (s)", ylabel="Gamma")
    svg.line_chart(phi_series, out.path("fig1_phi.svg"),
                   title="phase factor magnitude", xlabel="t (s)", ylabel="|Phi| (rad)")


def _run_report(scenario, out, rel_tol, jobs):
    rows = report_rows(scenario, rel_tol=rel_tol, jobs=jobs)
    _write_report_csv(out.path("report.csv"), rows)
    by_ab = {}
    for row in rows:
        by_ab.setdefault(row[1], []).append(row)
    kind = scenario.kind
    if kind in ("fig2", "fig3") and scenario.times.size > 1:
        q_par = [(_label(ab), [r[0] for r in rs], [r[10] for r in rs])
                 for ab, rs in by_ab.items()]
        q_perp = [(_label(ab), [r[0] for r in rs], [r[11] for r in rs])
                  for ab, rs in by_ab.items()]
        svg.line_chart(q_par, out.path(f"{kind}_q_par.svg"),
                       title="decay-channel QSNR", xlabel="t (s)",
                       ylabel="Q_par", logx=True, logy=True)
        svg.line_chart(q_perp, out.path(f"{kind}_q_perp.svg"),
                       title="phase-channel QSNR", xlabel="t (s)",
                       ylabel="Q_perp", logx=True, logy=True)
    if kind == "fig3" and scenario.times.size > 1:
        eta_series = [(_label(ab), [r[0] for r in rs],
                       [eta(r[11], scenario.chi, r[0]) for r in rs if r[0] > 0])
                      for ab, rs in by_ab.items()]
        svg.line_chart(eta_series, out.path("fig3_eta.svg"),
                       title="eta = Q_perp/(chi t)^2", xlabel="t (s)",
                       ylabel="eta (1/s^2)", logx=True)


def _run_fig4(scenario, out, rel_tol, meta):
    rows = []
    windows = []
    for a_b in scenario.a_b_values:
        model = scenario.model.with_a_b(a_b)
        est = eta_star(model, rel_tol=rel_tol)
        rows.append((a_b, est.plateau, est.asymptotic, est.window[0],
                     est.window[1], est.rel_variation))
        windows.append(est.window)
    meta["eta_star_windows_s"] = [[w[0], w[1]] for w in windows]
    with open(out.path("fig4_eta_star.csv"), "w", newline="") as fh:
        fh.write("aB_m,eta_star_plateau,eta_star_asymptotic,"
                 "window_t0_s,window_t1_s,rel_variation\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    svg.line_chart(
        [("plateau fit", [r[0] / A_RB for r in rows], [r[1] for r in rows]),
         ("asymptotic", [r[0] / A_RB for r in rows], [r[2] for r in rows])],
        out.path("fig4_eta_star.svg"), title="late-time eta plateau",
        xlabel="a_B / a_Rb", ylabel="eta* (1/s^2)")


def _run_discrete(scenario, out):
    traj = discrete_trajectory(scenario.reservoir, scenario.times,
                               scenario.omega0, scenario.frame)
    traj.to_csv(out.path("trajectory_discrete.csv"))
    svg.line_chart([("gamma", traj.times, traj.gamma),
                    ("phi", traj.times, traj.phi)],
                   out.path("discrete.svg"), title="discrete reservoir encoding",
                   xlabel="t (s)", ylabel="Gamma, Phi")


def _run_oracle(scenario, out, meta):
    rows = oracle_suite(seed=scenario.seed)
    with open(out.path("oracle_report.json"), "w") as fh:
        json.dump(rows, fh, indent=2)
        fh.write("\n")
    passed = sum(r["passed"] for r in rows)
    meta["oracle_cases"] = len(rows)
    meta["oracle_passed"] = int(passed)
    meta["oracle_all_passed"] = bool(passed == len(rows))
    for r in rows:
        status = "pass" if r["passed"] else "FAIL"
        print(f"[{status}] {r['case_id']}  max_abs_error={r['max_abs_error']:.3e} "
              f"n_max={r['n_max_used']}")
