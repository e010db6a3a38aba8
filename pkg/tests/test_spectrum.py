"""Fourier-symbol analysis: eigenvalues, amplification, stability regions."""

import numpy as np
import pytest

from kinproj.errors import SubcharacteristicViolation
from kinproj.model import make_model
from kinproj.space import make_mesh_1d
from kinproj.spectrum import (
    advise_parameters,
    amplification,
    asymptotic_eigenvalues,
    exact_eigenvalues,
    fast_radius,
    minimal_stable_K,
    outer_step_bound,
    pfe_amplification,
    pfe_stable,
    projective_amplification,
    projective_step_matrix,
    stability_disks,
    stencil_symbol,
    symbol_coefficients,
    symbol_matrix,
    zeta_modes,
)
from kinproj.timeint import OUTER_TABLEAUX, ProjectiveScheme
from kinproj.velocity import gauss_hermite_pair

RNG = np.random.default_rng(19)


# ---------------------------------------------------------------------------
# the 2x2 symbol and its eigenvalues
# ---------------------------------------------------------------------------

def test_constant_mode_eigenvalues():
    # zeta = 0: transport vanishes, M P - I has eigenvalues {0, -1}
    eps = 1e-3
    B = symbol_matrix(0.0, 1.0, eps, 1, 0.01)
    lam1, lam2 = exact_eigenvalues(B)
    assert lam1 == pytest.approx(0.0, abs=1e-10)
    assert lam2 == pytest.approx(-1.0 / eps, rel=1e-12)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_alpha_nonnegative_all_modes(order):
    """Upwind stencils are dissipative: Re of the symbol >= 0 at every mode."""
    for I in (16, 64):
        for zeta in zeta_modes(I):
            z = stencil_symbol(order, float(zeta), 1.7, 1.0 / I)
            assert z.real >= -1e-12


def test_first_order_symbol_closed_form():
    vstar, dx = 1.4, 0.02
    for zeta in (0.3, 1.1, 2.9):
        z = stencil_symbol(1, zeta, vstar, dx)
        assert z.real == pytest.approx(vstar * (1 - np.cos(zeta)) / dx, rel=1e-13)
        assert z.imag == pytest.approx(vstar * np.sin(zeta) / dx, rel=1e-13)


def test_eigenvalues_satisfy_characteristic_polynomial():
    for _ in range(50):
        alpha = RNG.uniform(0.0, 100.0)
        beta = RNG.uniform(-100.0, 100.0)
        eps = 10.0 ** RNG.uniform(-6, -1)
        vstar = RNG.uniform(0.3, 3.0)
        # build B directly from alpha, beta
        MP = 0.5 * np.array([[1 + 1 / vstar, 1 + 1 / vstar],
                             [1 - 1 / vstar, 1 - 1 / vstar]], dtype=complex)
        D = np.diag([alpha + 1j * beta, alpha - 1j * beta])
        B = (MP - np.eye(2)) / eps - D
        tr = B[0, 0] + B[1, 1]
        det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
        for lam in exact_eigenvalues(B):
            res = abs(lam * lam - tr * lam + det)
            # scale by the polynomial's own term sizes: evaluating chi at the
            # slow root cancels terms of size |tr*lam| ~ alpha/eps
            scale = max(1.0, abs(lam) ** 2, abs(tr * lam), abs(det))
            assert res <= 1e-12 * scale


def test_trace_and_determinant_identities():
    B = symbol_matrix(1.2, 1.5, 1e-4, 3, 0.01)
    lam1, lam2 = exact_eigenvalues(B)
    tr = B[0, 0] + B[1, 1]
    det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
    assert lam1 + lam2 == pytest.approx(tr, rel=1e-10)
    assert lam1 * lam2 == pytest.approx(det, rel=1e-10)


def test_asymptotic_leading_terms():
    alpha, beta, vstar = 3.0, 7.0, 1.5
    lam1, lam2 = asymptotic_eigenvalues(alpha, beta, vstar, 1e-300)
    assert lam1 == pytest.approx(complex(-alpha, -beta / vstar))
    assert lam2.real == pytest.approx(-1e300, rel=1e-12)


def test_asymptotic_corrections_vanish_at_unit_speed():
    # the eps corrections carry the factor (1 - vstar^2)
    alpha, beta = 2.0, 5.0
    lam1, _ = asymptotic_eigenvalues(alpha, beta, 1.0, 1e-2)
    assert lam1 == complex(-alpha, -beta / 1.0)


def test_exact_matches_asymptotic_at_high_order():
    """Truncation error of the slow eigenvalue decays ~eps^3 (real part)."""
    alpha, beta, vstar = 2.0, 9.0, 1.5
    gaps = []
    eps_list = (1e-2, 1e-3, 1e-4)
    for eps in eps_list:
        MP = 0.5 * np.array([[1 + 1 / vstar, 1 + 1 / vstar],
                             [1 - 1 / vstar, 1 - 1 / vstar]], dtype=complex)
        D = np.diag([alpha + 1j * beta, alpha - 1j * beta])
        B = (MP - np.eye(2)) / eps - D
        lam1, _ = exact_eigenvalues(B)
        as1, _ = asymptotic_eigenvalues(alpha, beta, vstar, eps)
        gaps.append(abs(lam1 - as1))
    slope = np.polyfit(np.log(eps_list), np.log(gaps), 1)[0]
    assert slope >= 2.0  # spec asks for <= C eps^2; the truncation is eps^3


def test_halving_eps_quarters_the_gap():
    alpha, beta, vstar = 1.0, 4.0, 2.0
    def gap(eps):
        B = symbol_like(alpha, beta, vstar, eps)
        lam1, _ = exact_eigenvalues(B)
        as1, _ = asymptotic_eigenvalues(alpha, beta, vstar, eps)
        return abs((lam1 - as1).real)
    g1, g2 = gap(1e-3), gap(5e-4)
    assert g1 / g2 >= 4.0  # at least quadratic decay of the real-part gap


def symbol_like(alpha, beta, vstar, eps):
    MP = 0.5 * np.array([[1 + 1 / vstar, 1 + 1 / vstar],
                         [1 - 1 / vstar, 1 - 1 / vstar]], dtype=complex)
    D = np.diag([alpha + 1j * beta, alpha - 1j * beta])
    return (MP - np.eye(2)) / eps - D


def test_spectrum_containment():
    """All fast eigenvalues lie in the disk around -1/eps of radius
    max_zeta sqrt(alpha^2 + beta^2/vstar^2)."""
    vstar, dx, order = 1.0, 0.02, 1
    I = 50
    for eps in (1e-2, 1e-3, 1e-4):
        zetas = zeta_modes(I)
        radius = fast_radius(order, vstar, dx, zetas)
        for zeta in zetas:
            B = symbol_matrix(float(zeta), vstar, eps, order, dx)
            _, lam2 = exact_eigenvalues(B)
            assert abs(lam2 + 1.0 / eps) <= radius + 1e-9 * (1.0 / eps)


# ---------------------------------------------------------------------------
# amplification factors and stability regions
# ---------------------------------------------------------------------------

def test_fe_amplification_kills_fast_mode():
    eps = 1e-6
    assert amplification(-1.0 / eps, "fe", eps) == pytest.approx(0.0, abs=1e-12)


def test_rk2_amplification_fast_mode_half():
    eps = 1e-6
    assert amplification(-1.0 / eps, "rk2", eps) == pytest.approx(0.5, rel=1e-12)


def test_zero_eigenvalue_neutral():
    assert amplification(0.0, "fe", 0.123) == 1.0
    assert amplification(0.0, "rk2", 0.123) == 1.0


def test_pfe_stability_boundary_and_zero():
    assert pfe_amplification(1.0, 3, 1e-4, 1e-2) == pytest.approx(1.0)
    assert pfe_stable(1.0, 3, 1e-4, 1e-2)
    assert pfe_amplification(0.0, 3, 1e-4, 1e-2) == 0.0
    assert pfe_stable(0.0, 3, 1e-4, 1e-2)


@pytest.mark.parametrize("K", [2, 3])
def test_fast_disk_radius_against_direct_evaluation(K):
    """|tau| below the limiting fast-disk radius is accepted by the closed
    form; |tau| well above is rejected (Delta_t/delta_t = 100)."""
    dt = 1e-4
    Dt = 100 * dt
    disks = stability_disks(dt, Dt, K)
    radius = (dt / Dt) ** (1.0 / K)
    assert disks.radius2 == pytest.approx(radius)
    for phi in np.linspace(0, 2 * np.pi, 40):
        tau_in = 0.85 * radius * np.exp(1j * phi)
        assert pfe_stable(tau_in, K, dt, Dt)
        tau_out = 1.6 * radius * np.exp(1j * phi)
        if abs(tau_out - disks.center1) > disks.radius1 * 1.5:
            assert not pfe_stable(tau_out, K, dt, Dt)


def test_prk_regions_contain_pfe_disks():
    """tau accepted by PFE inside its limiting disks is accepted by the
    projective RK2/RK4 step evaluated directly on the test equation."""
    dt = 1e-4
    Dt = 1e-2
    K = 2
    disks = stability_disks(dt, Dt, K)
    stable_checked = 0
    rng = np.random.default_rng(5)
    for _ in range(12000):
        if rng.uniform() < 0.5:
            tau = disks.center1 + disks.radius1 * rng.uniform() * np.exp(
                1j * rng.uniform(0, 2 * np.pi))
        else:
            tau = disks.center2 + disks.radius2 * rng.uniform() * np.exp(
                1j * rng.uniform(0, 2 * np.pi))
        if not pfe_stable(tau, K, dt, Dt):
            continue
        lam = (tau - 1.0) / dt
        for outer in ("prk2", "prk4"):
            scheme = ProjectiveScheme("fe", dt, dt, K, Dt, OUTER_TABLEAUX[outer])
            amp = projective_amplification(lam, scheme)
            assert abs(amp) <= 1.0 + 1e-9, (outer, tau)
        stable_checked += 1
    assert stable_checked >= 10000


# ---------------------------------------------------------------------------
# parameter advice
# ---------------------------------------------------------------------------

def _advection_setup(I=100):
    model = make_model("advection1d", a=1.0)
    mesh = make_mesh_1d(0.0, 1.0, I)
    u0 = np.exp(-100.0 * (mesh.x - 0.5) ** 2)[:, None]
    return model, mesh, u0


def test_advice_first_order_cfl_bound():
    model, mesh, u0 = _advection_setup()
    vset = gauss_hermite_pair(1.0)
    suggestion, report = advise_parameters(model, mesh, vset, 1e-8, u0,
                                           scheme="upwind1")
    assert report["Delta_t_bound"] == pytest.approx(mesh.dx, rel=1e-9)
    assert suggestion.K == 2
    assert suggestion.delta_t == 1e-8
    assert report["heuristic"] is False
    assert report["dt_bound_depends_on_eps"] is False


def test_advice_K_two_suffices_for_small_eps():
    model, mesh, u0 = _advection_setup()
    vset = gauss_hermite_pair(1.0)
    _, report = advise_parameters(model, mesh, vset, 1e-8, u0, scheme="upwind1")
    assert report["K_bound_formula"] <= 2.0
    # the K condition c*eps <= (eps/Dt)^(1/K) holds at K = 2
    c = report["fast_radius_c"]
    assert c * 1e-8 <= (1e-8 / report["Delta_t_bound"]) ** 0.5


def test_advice_bound_is_eps_free():
    model, mesh, u0 = _advection_setup()
    vset = gauss_hermite_pair(1.0)
    _, r1 = advise_parameters(model, mesh, vset, 1e-6, u0, scheme="upwind1")
    _, r2 = advise_parameters(model, mesh, vset, 1e-10, u0, scheme="upwind1")
    assert r1["Delta_t_bound"] == r2["Delta_t_bound"]


def test_advice_flags_subcharacteristic_violation():
    model, mesh, u0 = _advection_setup()
    vset = gauss_hermite_pair(0.5)  # slower than the unit advection speed
    with pytest.raises(SubcharacteristicViolation):
        advise_parameters(model, mesh, vset, 1e-8, u0, scheme="upwind1")


def test_advice_warns_for_rk2_inner():
    model, mesh, u0 = _advection_setup()
    vset = gauss_hermite_pair(1.0)
    _, report = advise_parameters(model, mesh, vset, 1e-8, u0, inner="rk2",
                                  scheme="upwind1")
    assert any("log(1/eps)" in w for w in report["warnings"])


def test_advice_heuristic_flag_for_nonlinear():
    model = make_model("burgers1d")
    mesh = make_mesh_1d(0.0, 2.0, 100)
    u0 = np.sin(np.pi * mesh.x)[:, None]
    vset = gauss_hermite_pair(1.0)
    _, report = advise_parameters(model, mesh, vset, 1e-8, u0, scheme="upwind1")
    assert report["heuristic"] is True


# ---------------------------------------------------------------------------
# stable-K search via composed step matrices
# ---------------------------------------------------------------------------

def test_projective_step_matrix_matches_scalar():
    B = np.diag([-2.0 + 1j, -50.0 + 0j])
    scheme = ProjectiveScheme("fe", 1e-2, 1e-2, 2, 0.1, OUTER_TABLEAUX["prk2"])
    P = projective_step_matrix(B, scheme)
    for i, lam in enumerate((-2.0 + 1j, -50.0 + 0j)):
        assert P[i, i] == pytest.approx(projective_amplification(lam, scheme), rel=1e-12)


def test_minimal_stable_K_fe_is_small():
    K = minimal_stable_K(1, 0.01, 1.0, 1e-6, 0.5 * 0.01, inner="fe")
    assert K is not None and K <= 2


def test_minimal_stable_K_rk2_grows_with_stiffness():
    K4 = minimal_stable_K(1, 0.01, 1.0, 1e-4, 0.5 * 0.01, inner="rk2")
    K6 = minimal_stable_K(1, 0.01, 1.0, 1e-6, 0.5 * 0.01, inner="rk2")
    assert K4 is not None and K6 is not None
    assert K6 > K4
