"""Exact Riemann solver for the 1D gamma-law Euler equations.

Standard two-branch pressure function (rarefaction below the side pressure,
shock above), solved for the star pressure by Newton iteration, then the
self-similar solution is sampled in xi = (x - x0)/t across the five regions:
left state, left fan, star-left, star-right (across the contact), right state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoConvergence


@dataclass(frozen=True)
class PrimitiveState:
    rho: float
    v: float
    p: float


def sound_speed(gamma: float, s: PrimitiveState) -> float:
    return math.sqrt(gamma * s.p / s.rho)


def _branch(gamma: float, p: float, side: PrimitiveState, a: float):
    """Pressure function f_K(p) and its derivative for one side."""
    if p <= side.p:  # rarefaction
        ratio = p / side.p
        f = 2.0 * a / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = 1.0 / (side.rho * a) * ratio ** (-(gamma + 1.0) / (2.0 * gamma))
    else:  # shock
        A = 2.0 / ((gamma + 1.0) * side.rho)
        B = (gamma - 1.0) / (gamma + 1.0) * side.p
        root = math.sqrt(A / (B + p))
        f = (p - side.p) * root
        df = root * (1.0 - 0.5 * (p - side.p) / (B + p))
    return f, df


def solve_star(gamma: float, left: PrimitiveState, right: PrimitiveState,
               tol: float = 1e-12, max_iter: int = 100):
    """Star-region pressure and velocity (p*, v*)."""
    aL = sound_speed(gamma, left)
    aR = sound_speed(gamma, right)
    if 2.0 * (aL + aR) / (gamma - 1.0) <= right.v - left.v:
        raise NoConvergence("vacuum-generating data has no star state")

    # primitive-variable guess, floored away from zero
    p = 0.5 * (left.p + right.p) - 0.125 * (right.v - left.v) * (
        left.rho + right.rho
    ) * (aL + aR)
    p = max(p, tol)
    dv = right.v - left.v
    for _ in range(max_iter):
        fL, dL = _branch(gamma, p, left, aL)
        fR, dR = _branch(gamma, p, right, aR)
        dp = (fL + fR + dv) / (dL + dR)
        p_new = p - dp
        if p_new <= 0.0:
            p_new = 0.5 * p
        if 2.0 * abs(p_new - p) / (p_new + p) < tol:
            p = p_new
            fL, _ = _branch(gamma, p, left, aL)
            fR, _ = _branch(gamma, p, right, aR)
            v = 0.5 * (left.v + right.v) + 0.5 * (fR - fL)
            return p, v
        p = p_new
    raise NoConvergence(f"star pressure iteration did not reach {tol:g} in {max_iter} steps")


def sample(gamma: float, left: PrimitiveState, right: PrimitiveState,
           p_star: float, v_star: float, xi: float) -> PrimitiveState:
    """Solution state at similarity coordinate xi = (x - x0) / t."""
    gm1, gp1 = gamma - 1.0, gamma + 1.0
    if xi <= v_star:
        side, a = left, sound_speed(gamma, left)
        if p_star > side.p:  # left shock
            S = side.v - a * math.sqrt(gp1 / (2.0 * gamma) * p_star / side.p
                                       + gm1 / (2.0 * gamma))
            if xi <= S:
                return side
            rho = side.rho * ((p_star / side.p + gm1 / gp1)
                              / (gm1 / gp1 * p_star / side.p + 1.0))
            return PrimitiveState(rho, v_star, p_star)
        # left rarefaction
        a_star = a * (p_star / side.p) ** (gm1 / (2.0 * gamma))
        if xi <= side.v - a:
            return side
        if xi >= v_star - a_star:
            rho = side.rho * (p_star / side.p) ** (1.0 / gamma)
            return PrimitiveState(rho, v_star, p_star)
        fac = 2.0 / gp1 + gm1 / (gp1 * a) * (side.v - xi)
        v = 2.0 / gp1 * (a + 0.5 * gm1 * side.v + xi)
        return PrimitiveState(side.rho * fac ** (2.0 / gm1), v,
                              side.p * fac ** (2.0 * gamma / gm1))
    side, a = right, sound_speed(gamma, right)
    if p_star > side.p:  # right shock
        S = side.v + a * math.sqrt(gp1 / (2.0 * gamma) * p_star / side.p
                                   + gm1 / (2.0 * gamma))
        if xi >= S:
            return side
        rho = side.rho * ((p_star / side.p + gm1 / gp1)
                          / (gm1 / gp1 * p_star / side.p + 1.0))
        return PrimitiveState(rho, v_star, p_star)
    # right rarefaction
    a_star = a * (p_star / side.p) ** (gm1 / (2.0 * gamma))
    if xi >= side.v + a:
        return side
    if xi <= v_star + a_star:
        rho = side.rho * (p_star / side.p) ** (1.0 / gamma)
        return PrimitiveState(rho, v_star, p_star)
    fac = 2.0 / gp1 - gm1 / (gp1 * a) * (side.v - xi)
    v = 2.0 / gp1 * (-a + 0.5 * gm1 * side.v + xi)
    return PrimitiveState(side.rho * fac ** (2.0 / gm1), v,
                          side.p * fac ** (2.0 * gamma / gm1))
