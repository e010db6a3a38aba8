"""Inner integrators (forward Euler, RK2) and outer projective integrators.

A projective step advances the state over an outer step ``Delta_t`` by taking
``K+1`` small inner steps of size ``delta_t``, estimating the time derivative
from the last two inner iterates,

    k = (y[K+1] - y[K]) / delta_t,

and extrapolating. Projective forward Euler is the one-stage case

    y_next = y[K+1] + (Delta_t - (K+1) delta_t) * k,

and projective Runge-Kutta methods feed the stage derivatives of a Butcher
tableau with such inner-step differences (each stage reruns K+1 inner steps
from a seeded state).

The integrators are generic: the state may be any ndarray (including complex
scalars and matrices, used by the stability analysis) or a tuple of ndarrays
(used to thread the boundary-flux ledger through the same linear combinations
as the solution itself).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np


# ---------------------------------------------------------------------------
# state algebra: ndarray-or-tuple
# ---------------------------------------------------------------------------

def _axpy(a, x, y):
    """y + a*x"""
    if isinstance(y, tuple):
        return tuple(yi + a * xi for xi, yi in zip(x, y))
    return y + a * x


def _diff_over(x, y, dt):
    """(x - y) / dt"""
    if isinstance(x, tuple):
        return tuple((xi - yi) / dt for xi, yi in zip(x, y))
    return (x - y) / dt


def _scale(x, a):
    if isinstance(x, tuple):
        return tuple(a * xi for xi in x)
    return a * x


def _add(x, y):
    if isinstance(x, tuple):
        return tuple(xi + yi for xi, yi in zip(x, y))
    return x + y


# ---------------------------------------------------------------------------
# Butcher tableaux
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ButcherTableau:
    """Explicit RK coefficients; rows of ``a`` are strictly lower triangular."""

    a: tuple
    b: tuple
    c: tuple
    order: int

    @property
    def stages(self) -> int:
        return len(self.b)


PFE_TABLEAU = ButcherTableau(a=((0.0,),), b=(1.0,), c=(0.0,), order=1)

RK2_MIDPOINT = ButcherTableau(
    a=((0.0, 0.0), (0.5, 0.0)),
    b=(0.0, 1.0),
    c=(0.0, 0.5),
    order=2,
)

RK4_CLASSIC = ButcherTableau(
    a=(
        (0.0, 0.0, 0.0, 0.0),
        (0.5, 0.0, 0.0, 0.0),
        (0.0, 0.5, 0.0, 0.0),
        (0.0, 0.0, 1.0, 0.0),
    ),
    b=(1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0),
    c=(0.0, 0.5, 0.5, 1.0),
    order=4,
)

OUTER_TABLEAUX = {"pfe": PFE_TABLEAU, "prk2": RK2_MIDPOINT, "prk4": RK4_CLASSIC}


def validate_tableau(t: ButcherTableau) -> list:
    """Diagnostic check of the consistency and convexity conditions.

    Returns the list of violated conditions (empty when the tableau is usable
    with the projective stability guarantee).
    """
    out = []
    S = t.stages
    if len(t.c) != S or len(t.a) != S:
        return [f"inconsistent sizes: a {len(t.a)}, b {S}, c {len(t.c)}"]
    if abs(sum(t.b) - 1.0) > 1e-12:
        out.append(f"sum(b) = {sum(t.b)!r} != 1")
    for s in range(S):
        if not (0.0 <= t.b[s] <= 1.0):
            out.append(f"b[{s}] = {t.b[s]} outside [0, 1]")
        if not (0.0 <= t.c[s] <= 1.0):
            out.append(f"c[{s}] = {t.c[s]} outside [0, 1]")
        row = t.a[s]
        if abs(sum(row[:s]) - t.c[s]) > 1e-12:
            out.append(f"sum(a[{s}, :{s}]) = {sum(row[:s])!r} != c[{s}] = {t.c[s]}")
        for l in range(S):
            if l >= s and row[l] != 0.0:
                out.append(f"a[{s}, {l}] = {row[l]} breaks lower-triangular form")
            if l < s and not (0.0 <= row[l] <= t.c[s]):
                out.append(f"a[{s}, {l}] = {row[l]} outside [0, c[{s}]]")
    if t.c[0] != 0.0:
        out.append(f"c[0] = {t.c[0]} != 0")
    return out


# ---------------------------------------------------------------------------
# schemes and steps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveScheme:
    """Inner-integrator choice plus the (eps, delta_t, K, Delta_t) bundle."""

    inner: str  # 'fe' | 'rk2'
    eps: float
    delta_t: float
    K: int
    Delta_t: float
    tableau: ButcherTableau = PFE_TABLEAU

    def validated(self) -> "ProjectiveScheme":
        problems = []
        if self.inner not in ("fe", "rk2"):
            problems.append(f"inner integrator {self.inner!r} not in ('fe', 'rk2')")
        if self.delta_t <= 0.0:
            problems.append("delta_t must be positive")
        if self.K < 0:
            problems.append("K must be >= 0")
        if self.Delta_t < (self.K + 1) * self.delta_t:
            problems.append(
                f"Delta_t = {self.Delta_t} < (K+1) delta_t = {(self.K + 1) * self.delta_t}"
            )
        problems += validate_tableau(self.tableau)
        if problems:
            raise ValueError("invalid projective scheme: " + "; ".join(problems))
        return self

    def with_outer_step(self, Delta_t: float) -> "ProjectiveScheme":
        return replace(self, Delta_t=Delta_t)


def _consume_axpy(a, r, y):
    """y + a*r, reusing r as the output buffer.

    The rhs contract hands ownership of its (freshly allocated) result to the
    integrator, so large-field updates can avoid a temporary.
    """
    if isinstance(r, tuple):
        return tuple(_consume_axpy(a, ri, yi) for ri, yi in zip(r, y))
    if isinstance(r, np.ndarray):
        r *= a
        r += y
        return r
    return y + a * r


def inner_step_fe(y, rhs: Callable, delta_t: float):
    """y + delta_t * D(y)"""
    return _consume_axpy(delta_t, rhs(y), y)


def inner_step_rk2(y, rhs: Callable, delta_t: float):
    """Midpoint rule: k2 = D(y + delta_t/2 k1), y + delta_t k2."""
    k1 = rhs(y)
    k2 = rhs(_consume_axpy(0.5 * delta_t, k1, y))
    return _consume_axpy(delta_t, k2, y)


INNER_STEPS = {"fe": inner_step_fe, "rk2": inner_step_rk2}


def projective_step(y, scheme: ProjectiveScheme, rhs: Callable):
    """One outer step of the projective integrator defined by ``scheme``."""
    dt = scheme.delta_t
    K = scheme.K
    Dt = scheme.Delta_t
    inner = INNER_STEPS[scheme.inner]
    tab = scheme.tableau
    S = tab.stages

    yk = y
    for _ in range(K):
        yk = inner(yk, rhs, dt)
    yK1 = inner(yk, rhs, dt)
    ks = [_diff_over(yK1, yk, dt)]

    for s in range(1, S):
        cs = tab.c[s]
        if cs == 0.0:
            # removable singularity of the seed formula; reuse the damped state
            seed = yK1
        else:
            acc = None
            for l in range(s):
                a_sl = tab.a[s][l]
                if a_sl == 0.0:
                    continue
                term = _scale(ks[l], a_sl / cs)
                acc = term if acc is None else _add(acc, term)
            coef = cs * Dt - (K + 1) * dt
            seed = yK1 if acc is None else _axpy(coef, acc, yK1)
        zk = seed
        for _ in range(K):
            zk = inner(zk, rhs, dt)
        zK1 = inner(zk, rhs, dt)
        ks.append(_diff_over(zK1, zk, dt))

    acc = None
    for s in range(S):
        bs = tab.b[s]
        if bs == 0.0:
            continue
        term = _scale(ks[s], bs)
        acc = term if acc is None else _add(acc, term)
    if acc is None:
        return yK1
    return _axpy(Dt - (K + 1) * dt, acc, yK1)


def make_scheme(outer: str, inner: str, eps: float, delta_t: Optional[float],
                K: int, Delta_t: float) -> ProjectiveScheme:
    """Assemble and validate a scheme; delta_t defaults to eps."""
    if outer not in OUTER_TABLEAUX:
        raise ValueError(f"outer method {outer!r} not in {sorted(OUTER_TABLEAUX)}")
    return ProjectiveScheme(
        inner=inner,
        eps=eps,
        delta_t=eps if delta_t is None else delta_t,
        K=K,
        Delta_t=Delta_t,
        tableau=OUTER_TABLEAUX[outer],
    ).validated()
