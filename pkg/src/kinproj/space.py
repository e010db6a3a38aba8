"""Structured meshes, boundary handling, and the semi-discrete transport-relaxation operator.

The spatial discretization acts on point values at cell centers
``x_i = lo + (i + 1/2) dx``. Upwind stencils for wind ``v > 0`` (mirrored for
``v < 0``):

    order 1:  (f_i - f_{i-1}) / dx
    order 2:  (3 f_i - 4 f_{i-1} + f_{i-2}) / (2 dx)
    order 3:  (2 f_{i+1} + 3 f_i - 6 f_{i-1} + f_{i-2}) / (6 dx)

ENO variants reconstruct interface values with adaptive stencils selected by
divided differences and difference the result, which keeps the scheme exactly
conservative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import ShapeMismatch, UnsupportedOrder
from .kernels import GW
from .velocity import VelocitySet

# v > 0 stencils as (offsets, coefficients); derivative = sum c_k f_{i+o_k} / dx.
# Single source of truth for the Fourier symbols used in the stability module.
UPWIND_STENCILS = {
    1: (np.array([0, -1]), np.array([1.0, -1.0])),
    2: (np.array([0, -1, -2]), np.array([1.5, -2.0, 0.5])),
    3: (np.array([1, 0, -1, -2]), np.array([1.0 / 3.0, 0.5, -1.0, 1.0 / 6.0])),
}

SCHEMES = {
    "upwind1": 1,
    "upwind2": 2,
    "upwind3": 3,
    "eno1": 1,  # first-order ENO degenerates to upwind
    "eno2": 12,
    "eno3": 13,
}

_BC_CODES = {"periodic": kernels.PERIODIC, "outflow": kernels.OUTFLOW}


def scheme_code(scheme: str) -> int:
    try:
        return SCHEMES[scheme]
    except KeyError:
        raise UnsupportedOrder(
            f"scheme must be one of {sorted(SCHEMES)}, got {scheme!r}"
        ) from None


@dataclass(frozen=True)
class Mesh:
    """Uniform structured mesh; 1D or 2D with per-axis boundary condition."""

    D: int
    extents: tuple  # ((lo, hi),) or ((lo, hi), (lo, hi)) as (x, y)
    I: int
    I_y: Optional[int] = None
    bc: str = "periodic"

    def __post_init__(self):
        assert self.D in (1, 2)
        assert self.I > GW, f"need more than {GW} cells per axis"
        if self.D == 2:
            assert self.I_y is not None and self.I_y > GW
        assert self.bc in _BC_CODES
        for lo, hi in self.extents:
            assert hi > lo

    @property
    def dx(self) -> float:
        lo, hi = self.extents[0]
        return (hi - lo) / self.I

    @property
    def dy(self) -> float:
        lo, hi = self.extents[1]
        return (hi - lo) / self.I_y

    @property
    def x(self) -> np.ndarray:
        lo, hi = self.extents[0]
        return lo + (np.arange(self.I) + 0.5) * self.dx

    @property
    def y(self) -> np.ndarray:
        lo, hi = self.extents[1]
        return lo + (np.arange(self.I_y) + 0.5) * self.dy

    @property
    def cell_volume(self) -> float:
        return self.dx if self.D == 1 else self.dx * self.dy

    def cells_shape(self) -> tuple:
        return (self.I,) if self.D == 1 else (self.I_y, self.I)


def make_mesh_1d(lo: float, hi: float, I: int, bc: str = "periodic") -> Mesh:
    return Mesh(D=1, extents=((lo, hi),), I=I, bc=bc)


def make_mesh_2d(extents, I: int, I_y: int, bc: str = "periodic") -> Mesh:
    return Mesh(D=2, extents=tuple(tuple(e) for e in extents), I=I, I_y=I_y, bc=bc)


def apply_bc(field: np.ndarray, mesh: Mesh, ghost: int = GW) -> np.ndarray:
    """Ghost-extended copy of a field whose leading axes are the mesh cells.

    Periodic wraps; outflow repeats the edge value (zero-order extrapolation).
    """
    out = field
    for axis in range(mesh.D):
        if mesh.bc == "periodic":
            left = out.take(range(out.shape[axis] - ghost, out.shape[axis]), axis=axis)
            right = out.take(range(ghost), axis=axis)
        else:
            left = out.take([0] * ghost, axis=axis)
            right = out.take([out.shape[axis] - 1] * ghost, axis=axis)
        out = np.concatenate([left, out, right], axis=axis)
    return out


def _deriv_1d(values: np.ndarray, v: float, code: int, dx: float, bc: str) -> np.ndarray:
    n = values.shape[0]
    fp = np.empty(n + 2 * GW)
    fp[GW:GW + n] = values
    kernels.fill_ghosts(fp, n, _BC_CODES[bc])
    d = np.empty(n)
    h = np.empty(n + 1)
    fr = np.empty(n + 2 * GW)
    kernels.deriv_slice(fp, d, h, fr, n, dx, v, code)
    return d


def upwind_derivative(values: np.ndarray, v: float, order: int, dx: float,
                      bc: str = "periodic") -> np.ndarray:
    """Fixed-stencil upwind estimate of d(values)/dx, biased by sign(v)."""
    if order not in (1, 2, 3):
        raise UnsupportedOrder(f"upwind order must be 1, 2 or 3, got {order}")
    return _deriv_1d(np.asarray(values, dtype=float), v, order, dx, bc)


def eno_derivative(values: np.ndarray, v: float, order: int, dx: float,
                   bc: str = "periodic") -> np.ndarray:
    """ENO estimate of d(values)/dx with adaptive stencil selection."""
    if order not in (1, 2, 3):
        raise UnsupportedOrder(f"ENO order must be 1, 2 or 3, got {order}")
    code = 1 if order == 1 else 10 + order
    return _deriv_1d(np.asarray(values, dtype=float), v, code, dx, bc)


class KineticOperator:
    """Semi-discrete right-hand side  D(f) = -v . grad f + (M(u) - f)/eps.

    Instances are callable on kinetic fields of shape ``cells + (J, M)`` and
    count their evaluations. ``eval_with_rate`` additionally returns the
    domain total of the transport term per component, which is the exact rate
    at which boundary fluxes change the conserved totals (used by the outflow
    ledger).
    """

    def __init__(self, model, vset: VelocitySet, mesh: Mesh, eps: float,
                 scheme: str = "upwind1"):
        if model.D != mesh.D or model.D != vset.D:
            raise ShapeMismatch("model, mesh and velocity set dimensions differ")
        if eps <= 0.0:
            raise ValueError("eps must be positive")
        self.model = model
        self.vset = vset
        self.mesh = mesh
        self.eps = float(eps)
        self.scheme = scheme
        self.code = scheme_code(scheme)
        self.params = model.kernel_params()
        self.evals = 0
        self._shape = mesh.cells_shape() + (vset.J, model.M)

    def _check(self, f: np.ndarray):
        if f.shape != self._shape:
            raise ShapeMismatch(f"expected field shape {self._shape}, got {f.shape}")

    def eval_with_rate(self, f: np.ndarray):
        self._check(f)
        self.evals += 1
        out = np.empty_like(f)
        bc = _BC_CODES[self.mesh.bc]
        if self.mesh.D == 1:
            rate = kernels.rhs_1d(
                f, out, self.vset.v[:, 0], self.vset.w, self.mesh.dx, self.eps,
                self.code, bc, self.model.code, self.params,
            )
        else:
            rate = kernels.rhs_2d(
                f, out, self.vset.v[:, 0], self.vset.v[:, 1], self.vset.w,
                self.vset.pair_a, self.vset.pair_b, self.mesh.dx, self.mesh.dy,
                self.eps, self.vset.a_sq, self.code, bc, bc,
                self.model.code, self.params,
            )
        return out, rate

    def __call__(self, f: np.ndarray) -> np.ndarray:
        return self.eval_with_rate(f)[0]


def semi_discrete_rhs(f: np.ndarray, model, vset: VelocitySet, mesh: Mesh,
                      eps: float, scheme: str = "upwind1") -> np.ndarray:
    """One-shot evaluation of the semi-discrete right-hand side."""
    return KineticOperator(model, vset, mesh, eps, scheme)(f)
