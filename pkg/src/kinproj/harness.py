"""Error measurement, convergence sweeps, and order fitting.

Errors are discrete L1 integrals: ``E = sum_i |u_i - ref_i| * dx`` summed over
components (cell volume in 2D). Order sweeps run the solver across a list of
grid spacings (with the outer step coupled to dx) or outer steps (fixed grid),
then fit a least-squares line through log E vs log h, excluding the round-off
/ O(eps) plateau: a point is plateau when its error is within 3x of the finest
point's error *and* the local slope is below 0.3. At least three surviving
points are required for a trustworthy fit.

For linear problems the temporal reference is the exact solution of the
semi-discretized system, computed with a dense matrix exponential of the
assembled transport + relaxation operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .config import make_config
from .errors import ShapeMismatch, WrongModel
from .model import Advection1D
from .problems import builtin_problem, exact_advection
from .solver import solve
from .space import Mesh, UPWIND_STENCILS, scheme_code
from .velocity import VelocitySet, bracket

PLATEAU_FACTOR = 3.0
PLATEAU_SLOPE = 0.3
MIN_FIT_POINTS = 3


def error_1norm(u: np.ndarray, ref: np.ndarray, dx: float, dy: Optional[float] = None) -> float:
    """Discrete L1 distance, summed over components."""
    u = np.asarray(u)
    ref = np.asarray(ref)
    if u.shape != ref.shape:
        raise ShapeMismatch(f"field shapes differ: {u.shape} vs {ref.shape}")
    vol = dx if dy is None else dx * dy
    return float(np.sum(np.abs(u - ref)) * vol)


@dataclass
class ErrorReport:
    xs: np.ndarray  # sweep values (dx or Dt), decreasing
    errors: np.ndarray
    slope: float
    used: np.ndarray  # mask of points entering the fit
    plateau: np.ndarray
    insufficient_points: bool
    floor: float  # smallest observed error
    label: str = ""
    meta: dict = field(default_factory=dict)


def fit_order(xs: Sequence[float], errors: Sequence[float], label: str = "") -> ErrorReport:
    """Least-squares slope in log-log, with automatic plateau exclusion."""
    xs = np.asarray(xs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    assert xs.ndim == 1 and xs.shape == errors.shape
    assert np.all(np.diff(xs) < 0), "sweep must be strictly decreasing"
    assert np.all(errors > 0), "errors must be positive"

    n = xs.shape[0]
    loge = np.log(errors)
    logx = np.log(xs)
    local = np.empty(n)
    # slope between each point and its finer neighbor; last reuses previous
    local[:-1] = (loge[:-1] - loge[1:]) / (logx[:-1] - logx[1:])
    local[-1] = local[-2] if n > 1 else np.nan
    plateau = (errors <= PLATEAU_FACTOR * errors[-1]) & (local < PLATEAU_SLOPE)
    used = ~plateau
    insufficient = int(used.sum()) < MIN_FIT_POINTS
    if int(used.sum()) >= 2:
        slope = float(np.polyfit(logx[used], loge[used], 1)[0])
    else:
        slope = float("nan")
    return ErrorReport(
        xs=xs, errors=errors, slope=slope, used=used, plateau=plateau,
        insufficient_points=insufficient, floor=float(errors.min()), label=label,
    )


# ---------------------------------------------------------------------------
# outer-step couplings used by the order experiments
# ---------------------------------------------------------------------------

def power_coupling(C: float, exponent: float) -> Callable[[float], float]:
    """Dt(dx) = C * dx**exponent."""
    return lambda dx: C * dx ** exponent


def paper_coupling(outer: str, p: int) -> Callable[[float], float]:
    """The Dt(dx) couplings used by the order experiments, per outer method."""
    if outer == "pfe":
        C = {1: 0.8, 2: 20.0, 3: 100.0}[p]
        return power_coupling(C, p)
    if outer == "prk2":
        if p in (1, 2):
            return power_coupling(0.5, 1.0)
        return power_coupling(5.0, 1.5)
    if outer == "prk4":
        return power_coupling(0.4, 1.0)
    raise ValueError(f"no coupling table for outer {outer!r}")


DX_SWEEP = (0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005, 0.0002, 0.0001)
DT_SWEEP = (0.04, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005, 0.0002, 0.0001)


def spatial_order_sweep(problem_name: str, outer: str, scheme: str,
                        dx_list: Sequence[float], coupling: Callable[[float], float],
                        *, eps: float = 1e-8, K: int = 2, T: float = 0.02,
                        inner: str = "fe", ic: str = "gauss") -> ErrorReport:
    """Run a problem at each dx with Dt = coupling(dx); error vs the exact solution."""
    problem = builtin_problem(problem_name, ic=ic)
    if problem.reference != "exact":
        raise WrongModel(f"{problem_name} has no exact reference for spatial sweeps")
    lo, hi = problem.extents[0]
    L = hi - lo
    errors = []
    kept, skipped = [], []
    for dx in dx_list:
        Dt = coupling(dx)
        if Dt > T * (1.0 + 1e-9):
            # the coupled outer step does not fit in the horizon: the point
            # cannot realize the Dt(dx) relation under test, so it is dropped
            skipped.append(dx)
            continue
        # couplings like Dt ~ dx^3 eventually fall below the (K+1)-step inner
        # window; there the projective step degenerates to plain inner stepping
        Dt = max(Dt, (K + 1) * eps)
        I = int(round(L / dx))
        cfg = make_config(problem_name, ic=ic, I=I, scheme=scheme, outer=outer,
                          inner=inner, eps=eps, K=K, T=T, Dt=Dt)
        res = solve(cfg)
        ref = exact_advection(problem, res.t, res.mesh)
        errors.append(error_1norm(res.u, ref, res.mesh.dx))
        kept.append(dx)
    report = fit_order(kept, errors, label=f"{problem_name} {outer}/{scheme} dx-sweep")
    report.meta = {"outer": outer, "scheme": scheme, "eps": eps, "K": K, "T": T,
                   "skipped_dx": skipped}
    return report


def temporal_order_sweep(problem_name: str, outer: str, Dt_list: Sequence[float],
                         *, I: int, scheme: str = "upwind3", eps: float = 1e-8,
                         K: int = 2, T: float = 0.04, inner: str = "fe",
                         ic: str = "gauss",
                         reference: Union[str, np.ndarray] = "expm") -> ErrorReport:
    """Fixed grid, swept outer step; error vs the semi-discrete solution.

    ``reference="expm"`` integrates the assembled linear semi-discrete system
    exactly (linear models only); otherwise pass a stored reference field on
    the same grid (nonlinear models).
    """
    errors = []
    ref = None
    for Dt in Dt_list:
        cfg = make_config(problem_name, ic=ic, I=I, scheme=scheme, outer=outer,
                          inner=inner, eps=eps, K=K, T=T, Dt=Dt)
        res = solve(cfg)
        if ref is None:
            if isinstance(reference, str) and reference == "expm":
                ref = expm_reference(res.problem.model, res.vset, res.mesh,
                                     scheme, eps, T, res.problem.initial_field(res.mesh))
            else:
                ref = np.asarray(reference)
        errors.append(error_1norm(res.u, ref, res.mesh.dx))
    report = fit_order(Dt_list, errors, label=f"{problem_name} {outer}/{scheme} Dt-sweep")
    report.meta = {"outer": outer, "scheme": scheme, "eps": eps, "K": K, "T": T, "I": I}
    return report


# ---------------------------------------------------------------------------
# dense semi-discrete operator (temporal reference for linear models)
# ---------------------------------------------------------------------------

def dense_semidiscrete_operator(model, vset: VelocitySet, mesh: Mesh,
                                scheme: str, eps: float) -> np.ndarray:
    """Assemble the periodic semi-discrete generator on (I*J) unknowns (M = 1).

    Unknown ordering is f.reshape(I*J) of a field f[i, j]. Transport applies
    the upwind stencil circulant per velocity; relaxation couples velocities
    within each cell through the linear advection Maxwellian
    M_j(u) = (1 + a/v_j) u with u = sum_l w_l f_l.
    """
    if not isinstance(model, Advection1D):
        raise WrongModel("dense operator implemented for 1D linear advection only")
    if mesh.bc != "periodic":
        raise WrongModel("dense operator assumes a periodic mesh")
    code = scheme_code(scheme)
    if code not in UPWIND_STENCILS:
        raise WrongModel("dense operator needs a fixed upwind stencil")
    offsets, coeffs = UPWIND_STENCILS[code]
    I, J = mesh.I, vset.J
    N = I * J
    A = np.zeros((N, N))
    dx = mesh.dx
    for j in range(J):
        vj = float(vset.v[j, 0])
        if vj >= 0:
            offs, cfs = offsets, coeffs
        else:
            offs, cfs = -offsets, -coeffs
        for i in range(I):
            row = i * J + j
            for o, cstencil in zip(offs, cfs):
                col = ((i + o) % I) * J + j
                A[row, col] += -vj * cstencil / dx
            fac = 1.0 + model.a / vj
            for l in range(J):
                A[row, i * J + l] += fac * vset.w[l] / eps
            A[row, row] -= 1.0 / eps
    return A


def expm_reference(model, vset: VelocitySet, mesh: Mesh, scheme: str, eps: float,
                   T: float, u0: np.ndarray) -> np.ndarray:
    """Exact-in-time solution of the linear semi-discrete system at time T."""
    A = dense_semidiscrete_operator(model, vset, mesh, scheme, eps)
    f0 = model.maxwellian(u0, vset)  # (I, J, 1)
    fT = scipy.linalg.expm(A * T) @ f0[:, :, 0].reshape(-1)
    fT = fT.reshape(mesh.I, vset.J, 1)
    return bracket(fT, vset)


def write_report_csv(report: ErrorReport, path: str, x_name: str = "h"):
    with open(path, "w") as fh:
        fh.write(f"{x_name},error,used_in_fit\n")
        for x, e, used in zip(report.xs, report.errors, report.used):
            fh.write(f"{x:.17g},{e:.17g},{int(used)}\n")


def report_summary(report: ErrorReport) -> dict:
    return {
        "label": report.label,
        "slope": report.slope,
        "floor": report.floor,
        "insufficient_points": bool(report.insufficient_points),
        "points_used": int(report.used.sum()),
        "xs": [float(x) for x in report.xs],
        "errors": [float(e) for e in report.errors],
        **report.meta,
    }
