"""Fourier-symbol stability analysis for the two-velocity 1D relaxation system.

With velocities ``+-vstar`` and the linear Maxwellian ``M(u) = u + u/v``, one
Fourier mode ``zeta`` of the semi-discrete system evolves by the 2x2 generator

    B = (1/eps) (-eps D + M P - I),
    M P = 1/2 [[1 + 1/vstar, 1 + 1/vstar], [1 - 1/vstar, 1 - 1/vstar]],
    D   = diag(alpha + i beta, alpha - i beta),

where ``alpha + i beta`` is the discrete Fourier transform of the upwind
stencil for wind ``+vstar`` at mode ``zeta`` (row/column 0 is the ``+vstar``
velocity). B has one slow eigenvalue (O(1)) and one fast eigenvalue
(-1/eps + O(1)); their asymptotic expansions in eps are implemented alongside
the exact quadratic-formula roots.

Projective-method stability is evaluated two ways: the closed-form projective
forward Euler amplification, and direct composition of the implemented
projective step on the scalar test equation / on the 2x2 symbol itself (used
for projective Runge-Kutta methods, whose limiting regions have no simple
closed form here).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SubcharacteristicViolation
from .space import UPWIND_STENCILS, SCHEMES
from .timeint import (
    OUTER_TABLEAUX,
    ProjectiveScheme,
    projective_step,
)


@dataclass(frozen=True)
class SymbolCoefficients:
    """Real/imaginary parts of the upwind symbol at one Fourier mode."""

    alpha: float
    beta: float
    zeta: float
    vstar: float


@dataclass(frozen=True)
class StabilityDisks:
    """Limiting PFE stability regions: slow disk near 1, fast disk near 0."""

    center1: float
    radius1: float
    center2: float
    radius2: float

    def contains_slow(self, tau) -> bool:
        return abs(tau - self.center1) <= self.radius1

    def contains_fast(self, tau) -> bool:
        return abs(tau - self.center2) <= self.radius2


def stability_disks(delta_t: float, Delta_t: float, K: int) -> StabilityDisks:
    r = delta_t / Delta_t
    return StabilityDisks(
        center1=1.0 - r, radius1=r, center2=0.0, radius2=r ** (1.0 / K)
    )


def _upwind_order(scheme_order) -> int:
    """Map a scheme name or order to the upwind order used for the symbol."""
    if isinstance(scheme_order, str):
        code = SCHEMES[scheme_order]
        return code - 10 if code > 10 else code
    order = int(scheme_order)
    if order in (12, 13):
        return order - 10
    return order


def stencil_symbol(order, zeta: float, vstar: float, dx: float) -> complex:
    """DFT of the wind-positive stencil: z(zeta) = (v*/dx) sum c_k e^{i o_k zeta}."""
    offsets, coeffs = UPWIND_STENCILS[_upwind_order(order)]
    z = complex(0.0, 0.0)
    for o, c in zip(offsets, coeffs):
        z += c * cmath.exp(1j * o * zeta)
    return vstar / dx * z


def symbol_coefficients(order, zeta: float, vstar: float, dx: float) -> SymbolCoefficients:
    z = stencil_symbol(order, zeta, vstar, dx)
    return SymbolCoefficients(alpha=z.real, beta=z.imag, zeta=zeta, vstar=vstar)


def symbol_matrix(zeta: float, vstar: float, eps: float, order, dx: float) -> np.ndarray:
    """The 2x2 Fourier-domain generator B = (1/eps)(-eps D + M P - I)."""
    if vstar == 0.0:
        raise ValueError("vstar must be nonzero")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    z = stencil_symbol(order, zeta, vstar, dx)
    MP = 0.5 * np.array(
        [
            [1.0 + 1.0 / vstar, 1.0 + 1.0 / vstar],
            [1.0 - 1.0 / vstar, 1.0 - 1.0 / vstar],
        ],
        dtype=complex,
    )
    D = np.array([[z, 0.0], [0.0, z.conjugate()]], dtype=complex)
    return (MP - np.eye(2)) / eps - D


def exact_eigenvalues(B: np.ndarray):
    """Both eigenvalues of a 2x2 matrix via the stably-evaluated quadratic formula.

    Returns (lambda_1, lambda_2) ordered so lambda_1 has the larger real part
    (the slow eigenvalue for the relaxation symbol).
    """
    tr = B[0, 0] + B[1, 1]
    det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
    s = cmath.sqrt(tr * tr - 4.0 * det)
    # avoid cancellation: pick the root with |tr + s| maximal
    if (tr.conjugate() * s).real < 0.0:
        s = -s
    r1 = 0.5 * (tr + s)
    r2 = det / r1 if r1 != 0.0 else 0.5 * (tr - s)
    if r1.real >= r2.real:
        return r1, r2
    return r2, r1


def exact_eigenvalues_from_symbol(alpha: float, beta: float, vstar: float, eps: float):
    """Exact eigenvalues evaluated from the analytic characteristic polynomial.

    Works on A = eps*B, whose characteristic coefficients

        tr(A)  = -(1 + 2 alpha eps),
        det(A) = eps ((1+vstar) z+ - (1-vstar) z-) / (2 vstar) + eps^2 z+ z-

    are sums of small terms with no stiff cancellation, unlike det(B) formed
    from the assembled matrix. Preferred when comparing against the
    asymptotic expansions at small eps.
    """
    zp = complex(alpha, beta)
    zm = complex(alpha, -beta)
    tr_A = -(1.0 + 2.0 * alpha * eps)
    det_A = eps * ((1.0 + vstar) * zp - (1.0 - vstar) * zm) / (2.0 * vstar) \
        + eps * eps * (zp * zm)
    s = cmath.sqrt(tr_A * tr_A - 4.0 * det_A)
    if (tr_A.conjugate() * s).real < 0.0:
        s = -s
    r1 = 0.5 * (tr_A + s)
    r2 = det_A / r1 if r1 != 0.0 else 0.5 * (tr_A - s)
    lam_a, lam_b = r1 / eps, r2 / eps
    if lam_a.real >= lam_b.real:
        return lam_a, lam_b
    return lam_b, lam_a


def asymptotic_eigenvalues(alpha: float, beta: float, vstar: float, eps: float):
    """Truncated small-eps expansions of the slow and fast eigenvalues."""
    fac = (1.0 - vstar * vstar) / (vstar * vstar)
    re_corr = beta * beta * fac * eps
    im_lead = beta / vstar
    im_corr = 2.0 * (beta ** 3 / vstar) * fac * eps * eps
    lam1 = complex(-alpha + re_corr, -im_lead + im_corr)
    lam2 = complex(-1.0 / eps - alpha - re_corr, im_lead - im_corr)
    return lam1, lam2


def amplification(lam, inner: str, delta_t: float) -> complex:
    """Scalar-test amplification factor of one inner step."""
    z = delta_t * lam
    if inner == "fe":
        return 1.0 + z
    if inner == "rk2":
        return 1.0 + z + 0.5 * z * z
    raise ValueError(f"inner integrator {inner!r} not in ('fe', 'rk2')")


def pfe_amplification(tau, K: int, delta_t: float, Delta_t: float) -> complex:
    """Closed-form growth factor of one projective forward Euler step."""
    c = (Delta_t - (K + 1) * delta_t) / delta_t
    return ((c + 1.0) * tau - c) * tau ** K


def pfe_stable(tau, K: int, delta_t: float, Delta_t: float) -> bool:
    return abs(pfe_amplification(tau, K, delta_t, Delta_t)) <= 1.0


def projective_amplification(lam, scheme: ProjectiveScheme) -> complex:
    """Growth factor of the implemented projective step on y' = lam * y."""
    return complex(projective_step(complex(1.0, 0.0), scheme, lambda y: lam * y))


def projective_step_matrix(B: np.ndarray, scheme: ProjectiveScheme) -> np.ndarray:
    """Matrix of one projective step applied to the linear system y' = B y."""
    eye = np.eye(B.shape[0], dtype=complex)
    return projective_step(eye, scheme, lambda Y: B @ Y)


def zeta_modes(I: int) -> np.ndarray:
    """Nonzero discrete Fourier modes zeta_i = 2 pi i / I, i = 1..I-1."""
    return 2.0 * np.pi * np.arange(1, I) / I


def fast_radius(order, vstar: float, dx: float, zetas: np.ndarray) -> float:
    """max over modes of sqrt(alpha^2 + beta^2 / vstar^2)."""
    best = 0.0
    for zeta in zetas:
        z = stencil_symbol(order, float(zeta), vstar, dx)
        best = max(best, math.hypot(z.real, z.imag / vstar))
    return best


def outer_step_bound(order, vstar: float, dx: float, zetas: np.ndarray) -> float:
    """min over modes of 2 alpha vstar^2 / (alpha^2 vstar^2 + beta^2).

    Keeps the slow inner-FE eigenvalue inside the slow PFE disk; independent
    of eps by construction.
    """
    best = math.inf
    for zeta in zetas:
        z = stencil_symbol(order, float(zeta), vstar, dx)
        a, b = z.real, z.imag
        denom = a * a * vstar * vstar + b * b
        if denom <= 0.0:
            continue
        best = min(best, 2.0 * a * vstar * vstar / denom)
    return best


def k_bound_formula(c: float, eps: float, Delta_t: float) -> float:
    """Inner-step-count bound  1/(1 + ln c / ln eps) + ln Dt / ln(1/(eps c))."""
    return 1.0 / (1.0 + math.log(c) / math.log(eps)) + math.log(Delta_t) / math.log(
        1.0 / (eps * c)
    )


def minimal_stable_K(order, dx: float, vstar: float, eps: float, Delta_t: float,
                     inner: str = "fe", outer: str = "pfe", I: Optional[int] = None,
                     K_max: int = 64, tol: float = 1e-9) -> Optional[int]:
    """Smallest K whose projective step damps every Fourier mode.

    Builds the exact per-mode projective-step matrix by composing the
    implemented integrator on the 2x2 symbol and checks its spectral radius.
    Returns None when no K <= K_max is stable.
    """
    if I is None:
        I = max(4, int(round(1.0 / dx)))
    zetas = zeta_modes(I)
    mats = [symbol_matrix(float(z), vstar, eps, order, dx) for z in zetas]
    K_cap = min(K_max, int(Delta_t / eps) - 1)
    for K in range(0, K_cap + 1):
        scheme = ProjectiveScheme(
            inner=inner, eps=eps, delta_t=eps, K=K, Delta_t=Delta_t,
            tableau=OUTER_TABLEAUX[outer],
        )
        ok = True
        for B in mats:
            P = projective_step_matrix(B, scheme)
            if np.max(np.abs(np.linalg.eigvals(P))) > 1.0 + tol:
                ok = False
                break
        if ok:
            return K
    return None


def advise_parameters(model, mesh, vset, eps: float, u_field: np.ndarray,
                      outer: str = "pfe", inner: str = "fe",
                      scheme: str = "upwind1"):
    """Suggest (delta_t, K, Delta_t) for the configured problem.

    delta_t = eps centers the fast inner-FE amplification at 0; Delta_t comes
    from scanning the discrete modes of the slow-eigenvalue bound; K is the
    smallest integer >= 2 with  c*eps <= (eps/Delta_t)^(1/K).

    Exact for the 1D scalar two-velocity setting with fixed upwind stencils;
    anything else is extrapolated and flagged ``heuristic`` in the report.
    """
    speeds = model.max_wave_speed(u_field)
    vset_speeds = vset.speeds
    for d in range(model.D):
        if vset_speeds[d] + 1e-12 * abs(vset_speeds[d]) < speeds[d]:
            raise SubcharacteristicViolation(
                f"velocities ({vset_speeds[d]:.6g}) slower than waves "
                f"({speeds[d]:.6g}) along axis {d}"
            )

    vstar = float(vset_speeds[0])
    order = _upwind_order(scheme)
    heuristic = not (
        model.name == "advection1d" and vset.J == 2
        and scheme in ("upwind1", "upwind2", "upwind3")
    )
    zetas = zeta_modes(mesh.I)

    alpha_min = min(stencil_symbol(order, float(z), vstar, mesh.dx).real for z in zetas)
    # outer_step_bound takes no eps argument: the advised Delta_t cannot
    # depend on the stiffness, which is the asymptotic-preserving property
    dt_bound = outer_step_bound(order, vstar, mesh.dx, zetas)

    c = fast_radius(order, vstar, mesh.dx, zetas)
    K = 2
    while c * eps > (eps / dt_bound) ** (1.0 / K) and K < 64:
        K += 1
    k_formula = k_bound_formula(c, eps, dt_bound)

    warnings = []
    if alpha_min < -1e-12:
        warnings.append(f"unstable stencil: min alpha = {alpha_min:.3e} < 0")
    if inner == "rk2":
        warnings.append(
            "even-order inner integrator: fast modes cannot be centered at 0, "
            "stable K grows like log(1/eps)"
        )

    suggestion = ProjectiveScheme(
        inner=inner, eps=eps, delta_t=eps, K=K, Delta_t=dt_bound,
        tableau=OUTER_TABLEAUX[outer],
    ).validated()
    report = {
        "delta_t": eps,
        "K": K,
        "K_bound_formula": k_formula,
        "Delta_t_bound": dt_bound,
        "fast_radius_c": c,
        "alpha_min": alpha_min,
        "dt_bound_depends_on_eps": False,
        "heuristic": heuristic,
        "warnings": warnings,
    }
    return suggestion, report
