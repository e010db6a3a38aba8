"""Run orchestration: build a kinetic run from a config and integrate to T.

The solution is lifted to the kinetic equilibrium of the initial macroscopic
data (well-prepared start) and advanced with the configured projective
integrator. The last outer step is shortened so the run lands on T (and on
every requested snapshot time) exactly; shortened steps still take K+1 inner
steps.

Per outer step the driver checks finiteness (stiff explicit integration is
supposed to fail loudly) and re-checks the subcharacteristic condition on the
evolving field; a violation is logged and, when ``velocities.rescale`` is on,
the velocity set is enlarged to the new wave-speed bound and the distribution
re-lifted to equilibrium (an O(eps) perturbation).

For outflow runs, a boundary-flux ledger is threaded through the exact same
linear combinations as the state itself, so the conserved totals satisfy
``total(T) = total(0) + ledger`` up to relaxation round-off; the residual is
reported for conservation audits.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import RunConfig, resolve_config
from .errors import NonFiniteError, NonPhysicalState
from .model import check_moments
from .problems import Problem, builtin_problem
from .space import KineticOperator, Mesh
from .timeint import make_scheme, projective_step
from .velocity import bracket, bracket_paired, gauss_hermite_pair, orthogonal_velocities, v_max_bound

log = logging.getLogger("kinproj")

MASS_RECORD_INTERVAL = 100  # outer steps between conservation samples


@dataclass
class RunResult:
    config: RunConfig
    problem: Problem
    mesh: Mesh
    t: float
    u: np.ndarray
    f: np.ndarray
    outer_steps: int
    rhs_evals: int
    wall_time: float
    totals_initial: np.ndarray
    totals_final: np.ndarray
    mass_history: list = field(default_factory=list)  # (step, t, totals)
    ledger: Optional[np.ndarray] = None
    ledger_residual: Optional[np.ndarray] = None
    #: subcharacteristic violations seen while stepping: (step, old, new, rescaled)
    rescale_events: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)  # t -> macro field
    vset: object = None
    sigma_initial: Optional[float] = None
    l1_initial: Optional[np.ndarray] = None
    l1_final: Optional[np.ndarray] = None

    @property
    def conservation_drift(self) -> np.ndarray:
        """Change of each conserved total, relative to the component's L1 size."""
        scale = np.maximum(np.maximum(self.l1_initial, self.l1_final), 1e-30)
        return (self.totals_final - self.totals_initial) / scale


def _macro(f: np.ndarray, vset, D: int) -> np.ndarray:
    return bracket_paired(f, vset) if D == 2 else bracket(f, vset)


def solve(cfg: RunConfig) -> RunResult:
    """Integrate the configured problem to its final time."""
    cfg = resolve_config(cfg)
    problem = builtin_problem(cfg.problem.name, ic=cfg.problem.ic, **cfg.model_params())
    model = problem.model
    mesh = problem.mesh(cfg.space.I, cfg.space.I_y, bc=cfg.space.bc)
    T = cfg.problem.T

    u0 = problem.initial_field(mesh)
    if not np.all(np.isfinite(u0)):
        raise NonPhysicalState("initial condition is not finite on the mesh")
    if not model.admissible(u0):
        raise NonPhysicalState("initial condition violates model admissibility")

    vel = cfg.velocities
    if model.D == 1:
        sigma = vel.sigma if vel.sigma is not None else float(model.max_wave_speed(u0)[0])
        vset = gauss_hermite_pair(sigma)
    else:
        vmax = vel.v_max if vel.v_max is not None else float(v_max_bound(model, u0, vel.R))
        vset = orthogonal_velocities(vel.R, vel.S, vmax)
    check_moments(model, u0, vset, tol=1e-10)

    eps = cfg.time.eps
    delta_t = cfg.time.dt_inner if cfg.time.dt_inner is not None else eps
    Dt = cfg.time.Dt if cfg.time.Dt is not None else cfg.time.cfl * mesh.dx
    scheme = make_scheme(cfg.time.outer, cfg.time.inner, eps, delta_t, cfg.time.K, Dt)

    op = KineticOperator(model, vset, mesh, eps, scheme=cfg.space.scheme)
    track_ledger = mesh.bc == "outflow"

    f = model.maxwellian(u0, vset)
    vol = mesh.cell_volume
    sum_axes = tuple(range(mesh.D))
    totals0 = u0.sum(axis=sum_axes) * vol
    l1_0 = np.abs(u0).sum(axis=sum_axes) * vol

    if track_ledger:
        state = (f, np.zeros(model.M))
        rhs = lambda s: op.eval_with_rate(s[0])  # noqa: E731
    else:
        state = f
        rhs = op

    snap_times = sorted(set(cfg.output.snapshots))
    events = [t for t in snap_times if t < T] + [T]
    result = RunResult(
        config=cfg, problem=problem, mesh=mesh, t=0.0, u=u0, f=f,
        outer_steps=0, rhs_evals=0, wall_time=0.0,
        totals_initial=totals0, totals_final=totals0,
        vset=vset, sigma_initial=vset.sigma if model.D == 1 else vset.v_max,
        l1_initial=l1_0, l1_final=l1_0,
    )
    result.mass_history.append((0, 0.0, totals0))

    rescale_on = vel.rescale
    evals_before = 0
    n = 0
    t = 0.0
    t0_wall = time.perf_counter()
    for event in events:
        while t < event:
            remaining = event - t
            if remaining <= Dt * (1.0 + 1e-9):
                step_scheme = scheme.with_outer_step(remaining)
                t_next = event
            else:
                step_scheme = scheme
                t_next = t + Dt
            state = projective_step(state, step_scheme, rhs)
            n += 1
            t = t_next
            f = state[0] if track_ledger else state

            if not math.isfinite(float(np.sum(f))):
                raise NonFiniteError(n)

            need_macro = model.u_dependent_speed or n % MASS_RECORD_INTERVAL == 0
            if need_macro:
                u = _macro(f, vset, model.D)
                speeds = model.max_wave_speed(u)
                guaranteed = vset.speeds
                worst = float(np.max(speeds / guaranteed))
                if worst > 1.0 + 1e-9:
                    old = float(np.max(guaranteed))
                    new = old * worst
                    if rescale_on:
                        if model.D == 1:
                            vset = gauss_hermite_pair(new)
                        else:
                            vset = orthogonal_velocities(vel.R, vel.S, new)
                        evals_before += op.evals
                        op = KineticOperator(model, vset, mesh, eps, scheme=cfg.space.scheme)
                        f = model.maxwellian(u, vset)
                        state = (f, state[1]) if track_ledger else f
                        if track_ledger:
                            rhs = lambda s: op.eval_with_rate(s[0])  # noqa: E731
                        else:
                            rhs = op
                        log.warning(
                            "step %d: wave speed %.6g exceeded velocities %.6g; rescaled",
                            n, new, old,
                        )
                    elif not result.rescale_events:
                        log.warning(
                            "step %d: subcharacteristic condition violated "
                            "(wave speed %.6g > velocities %.6g); set "
                            "velocities.rescale or a larger sigma/v_max to enforce it",
                            n, new, old,
                        )
                    result.rescale_events.append((n, old, new, rescale_on))
                if n % MASS_RECORD_INTERVAL == 0:
                    result.mass_history.append((n, t, u.sum(axis=sum_axes) * vol))
        if event < T or event in snap_times:
            result.snapshots[event] = _macro(f, vset, model.D)

    u = _macro(f, vset, model.D)
    result.t = t
    result.u = u
    result.f = f
    result.outer_steps = n
    result.rhs_evals = evals_before + op.evals
    result.wall_time = time.perf_counter() - t0_wall
    result.totals_final = u.sum(axis=sum_axes) * vol
    result.l1_final = np.abs(u).sum(axis=sum_axes) * vol
    result.mass_history.append((n, t, result.totals_final))
    result.vset = vset
    if track_ledger:
        result.ledger = state[1]
        result.ledger_residual = result.totals_final - result.totals_initial - state[1]
    return result
