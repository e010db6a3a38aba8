"""Error norms, order fitting, plateau handling, and the expm reference."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kinproj.config import make_config
from kinproj.errors import ShapeMismatch
from kinproj.harness import (
    dense_semidiscrete_operator,
    error_1norm,
    expm_reference,
    fit_order,
    paper_coupling,
)
from kinproj.model import make_model
from kinproj.problems import builtin_problem
from kinproj.solver import solve
from kinproj.space import make_mesh_1d
from kinproj.velocity import gauss_hermite_pair


# ---------------------------------------------------------------------------
# discrete L1 error
# ---------------------------------------------------------------------------

def test_error_identical_fields():
    u = np.random.default_rng(0).normal(size=(16, 2))
    assert error_1norm(u, u, 0.1) == 0.0


def test_error_constant_offset():
    # offset c over I cells of total length L contributes c*L per component
    I, L, c = 20, 2.0, 0.3
    dx = L / I
    u = np.zeros((I, 2))
    ref = u + c
    assert error_1norm(u, ref, dx) == pytest.approx(2 * c * L, rel=1e-14)


def test_error_eight_cell_fixture_hand_sum():
    dx = 0.125
    u = np.array([0.0, 1.0, 2.0, 3.0, -1.0, 0.5, 0.25, 2.0])[:, None]
    ref = np.array([0.5, 1.0, 1.5, 2.0, 1.0, 0.0, 0.25, -1.0])[:, None]
    # |diff| = [.5, 0, .5, 1, 2, .5, 0, 3] summing to 7.5
    assert error_1norm(u, ref, dx) == pytest.approx(7.5 * dx, rel=1e-15)


def test_error_2d_uses_cell_area():
    u = np.zeros((4, 5, 1))
    ref = np.ones((4, 5, 1))
    assert error_1norm(u, ref, 0.1, 0.2) == pytest.approx(20 * 0.1 * 0.2)


def test_error_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        error_1norm(np.zeros((4, 1)), np.zeros((5, 1)), 0.1)


@given(seed=st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_error_is_a_metric(seed):
    rng = np.random.default_rng(seed)
    a, b, c = rng.normal(size=(3, 12, 2))
    dx = 0.05
    dab = error_1norm(a, b, dx)
    assert dab >= 0
    assert dab == pytest.approx(error_1norm(b, a, dx), abs=1e-12)
    assert dab <= error_1norm(a, c, dx) + error_1norm(c, b, dx) + 1e-12


# ---------------------------------------------------------------------------
# slope fitting and plateau exclusion
# ---------------------------------------------------------------------------

def test_fit_order_clean_second_order():
    xs = np.array([0.1, 0.05, 0.025, 0.0125])
    rep = fit_order(xs, 3.0 * xs ** 2)
    assert rep.slope == pytest.approx(2.0, abs=1e-12)
    assert not rep.insufficient_points
    assert rep.used.all()


def test_fit_order_excludes_plateau_tail():
    xs = np.array([0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125, 0.0015625])
    errors = np.maximum(3.0 * xs ** 2, 1e-4)
    rep = fit_order(xs, errors)
    assert rep.plateau[-1] and rep.plateau[-2]
    assert not rep.plateau[0]
    assert rep.slope == pytest.approx(2.0, abs=0.1)
    assert rep.floor == pytest.approx(errors.min())


def test_fit_order_flags_insufficient_points():
    xs = np.array([0.1, 0.05, 0.025, 0.0125])
    errors = np.full(4, 1e-8)
    errors[0] = 1.1e-8  # everything flat: at most the head survives
    rep = fit_order(xs, errors)
    assert rep.insufficient_points


def test_coupling_tables():
    assert paper_coupling("pfe", 3)(0.01) == pytest.approx(100 * 1e-6)
    assert paper_coupling("prk2", 2)(0.01) == pytest.approx(0.005)
    assert paper_coupling("prk2", 3)(0.04) == pytest.approx(5 * 0.04 ** 1.5)
    assert paper_coupling("prk4", 1)(0.01) == pytest.approx(0.004)


# ---------------------------------------------------------------------------
# dense semi-discrete reference
# ---------------------------------------------------------------------------

def test_expm_reference_at_time_zero():
    problem = builtin_problem("advection1d")
    mesh = problem.mesh(32)
    vset = gauss_hermite_pair(1.0)
    u0 = problem.initial_field(mesh)
    ref = expm_reference(problem.model, vset, mesh, "upwind3", 1e-6, 0.0, u0)
    assert np.allclose(ref, u0, rtol=0, atol=1e-12)


def test_dense_operator_matches_kinetic_rhs():
    """The assembled matrix reproduces the compiled rhs on random fields."""
    from kinproj.space import KineticOperator

    model = make_model("advection1d")
    mesh = make_mesh_1d(0.0, 1.0, 16)
    vset = gauss_hermite_pair(1.3)
    eps = 1e-3
    A = dense_semidiscrete_operator(model, vset, mesh, "upwind2", eps)
    op = KineticOperator(model, vset, mesh, eps, "upwind2")
    rng = np.random.default_rng(4)
    f = rng.normal(size=(16, 2, 1))
    got = op(f).reshape(-1)
    want = A @ f.reshape(-1)
    assert np.allclose(got, want, rtol=0, atol=1e-11 * np.max(np.abs(want)))


def test_expm_reference_matches_tiny_step_run():
    """Exact-in-time reference vs the solver at a small outer step."""
    problem = builtin_problem("advection1d")
    I, eps, T = 50, 1e-6, 0.01
    mesh = problem.mesh(I)
    vset = gauss_hermite_pair(1.0)
    u0 = problem.initial_field(mesh)
    ref = expm_reference(problem.model, vset, mesh, "upwind3", eps, T, u0)
    cfg = make_config("advection1d", I=I, scheme="upwind3", outer="prk4",
                      eps=eps, K=2, T=T, Dt=2e-4)
    res = solve(cfg)
    # the remaining gap is the O((K+1) eps) projective bias
    assert error_1norm(res.u, ref, mesh.dx) <= (2 + 1) * eps


def test_spatial_error_floor_near_sqrt_machine_eps():
    """At eps = 1e-8 the fine-grid error bottoms out around sqrt(eps_mach):
    the projective derivative estimate divides an O(eps_mach) difference by
    delta_t = eps."""
    from kinproj.problems import exact_advection

    dx = 2e-4
    cfg = make_config("advection1d", I=int(round(1 / dx)), scheme="upwind3",
                      outer="prk4", eps=1e-8, K=2, T=0.02, Dt=0.4 * dx)
    res = solve(cfg)
    ref = exact_advection(builtin_problem("advection1d"), res.t, res.mesh)
    err = error_1norm(res.u, ref, res.mesh.dx)
    # pure upwind3 truncation would be ~5e-11 here; the floor dominates
    assert 1e-10 <= err <= 1e-7
