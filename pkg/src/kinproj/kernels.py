"""Compiled stencil and right-hand-side kernels.

Everything here is numba-compiled with strict IEEE semantics (no fastmath):
runs are bitwise reproducible, and the 2D kernels are written so that a field
symmetric under the diagonal reflection ``(x, y, v) -> (y, x, v-swapped)``
stays *exactly* symmetric:

* two-term sums (x-transport + y-transport, x-flux + y-flux contributions to
  the Maxwellian) are single expressions, so the reflection only commutes one
  floating-point addition;
* the velocity bracket accumulates reflection-paired terms (see
  :mod:`kinproj.velocity`).

Scheme codes: 1/2/3 fixed upwind of that order, 12/13 ENO of order 2/3.
Boundary codes: 0 periodic, 1 outflow (zero-order extrapolation).
Model codes follow :mod:`kinproj.model`.
"""

import numpy as np
from numba import njit

GW = 3  # ghost width; enough for every implemented stencil

PERIODIC, OUTFLOW = 0, 1


@njit(cache=True)
def fill_ghosts(fp, n, bc):
    """Fill 2*GW ghost values of a padded slice fp (interior at fp[GW:GW+n])."""
    if bc == PERIODIC:
        for t in range(GW):
            fp[t] = fp[n + t]
            fp[GW + n + t] = fp[GW + t]
    else:
        for t in range(GW):
            fp[t] = fp[GW]
            fp[GW + n + t] = fp[GW + n - 1]


ENO_BIAS = 10.0  # top-level preference factor for the linear upwind stencil


@njit(cache=True)
def _eno_pos_interfaces(fp, h, n, k):
    """ENO reconstruction of order k at all n+1 interfaces, wind > 0.

    h[t] approximates the flux value at the interface between padded cells
    GW+t-1 and GW+t. Stencils start from the upwind cell; the first extension
    compares first differences plainly (ties go upwind), steering the window
    away from rough regions. The second extension is biased toward the shift
    r = 1, whose final stencil is that of the linear third-order upwind
    scheme: the one-sided alternatives must be smoother by ENO_BIAS to win.
    Without the bias, near-tie second differences around smooth extrema flip
    the stencil from cell to cell, and the switching noise costs an order of
    accuracy after time integration. At discontinuities the indicators differ
    by orders of magnitude, so the adaptive choices there are unaffected.
    """
    for t in range(n + 1):
        base = GW + t - 1
        r = 0
        if k >= 2:
            dl = fp[base] - fp[base - 1]
            dr_ = fp[base + 1] - fp[base]
            if abs(dl) <= abs(dr_):
                r = 1
        if k == 3:
            i0 = base - r
            d2l = fp[i0 + 1] - 2.0 * fp[i0] + fp[i0 - 1]
            d2r = fp[i0 + 2] - 2.0 * fp[i0 + 1] + fp[i0]
            if r == 1:
                if ENO_BIAS * abs(d2l) < abs(d2r):
                    r = 2
            else:
                if not (ENO_BIAS * abs(d2r) < abs(d2l)):
                    r = 1
        if k == 2:
            if r == 0:
                h[t] = 0.5 * fp[base] + 0.5 * fp[base + 1]
            else:
                h[t] = -0.5 * fp[base - 1] + 1.5 * fp[base]
        else:
            if r == 0:
                h[t] = (1.0 / 3.0) * fp[base] + (5.0 / 6.0) * fp[base + 1] - (1.0 / 6.0) * fp[base + 2]
            elif r == 1:
                h[t] = -(1.0 / 6.0) * fp[base - 1] + (5.0 / 6.0) * fp[base] + (1.0 / 3.0) * fp[base + 1]
            else:
                h[t] = (1.0 / 3.0) * fp[base - 2] - (7.0 / 6.0) * fp[base - 1] + (11.0 / 6.0) * fp[base]


@njit(cache=True)
def deriv_slice(fp, d, h, fr, n, dx, v, order):
    """Upwinded d/dx estimate on one padded slice.

    fp: padded values (ghosts already filled), d: output (n,), h: interface
    scratch (n+1,), fr: reversal scratch like fp (ENO with v < 0 only).
    """
    if order == 1:
        if v > 0.0:
            for i in range(n):
                kk = GW + i
                d[i] = (fp[kk] - fp[kk - 1]) / dx
        else:
            for i in range(n):
                kk = GW + i
                d[i] = (fp[kk + 1] - fp[kk]) / dx
    elif order == 2:
        if v > 0.0:
            for i in range(n):
                kk = GW + i
                d[i] = (3.0 * fp[kk] - 4.0 * fp[kk - 1] + fp[kk - 2]) / (2.0 * dx)
        else:
            for i in range(n):
                kk = GW + i
                d[i] = -(3.0 * fp[kk] - 4.0 * fp[kk + 1] + fp[kk + 2]) / (2.0 * dx)
    elif order == 3:
        if v > 0.0:
            for i in range(n):
                kk = GW + i
                d[i] = (2.0 * fp[kk + 1] + 3.0 * fp[kk] - 6.0 * fp[kk - 1] + fp[kk - 2]) / (6.0 * dx)
        else:
            for i in range(n):
                kk = GW + i
                d[i] = -(2.0 * fp[kk - 1] + 3.0 * fp[kk] - 6.0 * fp[kk + 1] + fp[kk + 2]) / (6.0 * dx)
    else:
        k = order - 10
        if v > 0.0:
            _eno_pos_interfaces(fp, h, n, k)
            for i in range(n):
                d[i] = (h[i + 1] - h[i]) / dx
        else:
            # mirror x -> -x: wind becomes positive for the reversed slice
            ntot = n + 2 * GW
            for t in range(ntot):
                fr[t] = fp[ntot - 1 - t]
            _eno_pos_interfaces(fr, h, n, k)
            for i in range(n):
                d[i] = -(h[n - i] - h[n - 1 - i]) / dx


# ---------------------------------------------------------------------------
# model fluxes (must mirror kinproj.model bitwise; x/y expressions are exact
# reflections of each other so diagonal symmetry survives in 2D)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _flux_1d(u, F, model, params):
    I, M = u.shape
    if model == 0:  # linear advection
        a = params[0]
        for i in range(I):
            F[i, 0] = a * u[i, 0]
    elif model == 1:  # Burgers
        for i in range(I):
            F[i, 0] = 0.5 * u[i, 0] * u[i, 0]
    else:  # 1D Euler
        gam = params[2]
        for i in range(I):
            rho = u[i, 0]
            mom = u[i, 1]
            E = u[i, 2]
            vel = mom / rho
            p = (gam - 1.0) * (E - 0.5 * mom * vel)
            F[i, 0] = mom
            F[i, 1] = mom * vel + p
            F[i, 2] = (E + p) * vel


@njit(cache=True)
def _flux_2d(u, Fx, Fy, model, params):
    ny, nx, M = u.shape
    if model == 3:  # linear advection
        a = params[0]
        b = params[1]
        for iy in range(ny):
            for ix in range(nx):
                Fx[iy, ix, 0] = a * u[iy, ix, 0]
                Fy[iy, ix, 0] = b * u[iy, ix, 0]
    elif model == 4:  # shallow water
        g = params[3]
        for iy in range(ny):
            for ix in range(nx):
                h = u[iy, ix, 0]
                mx = u[iy, ix, 1]
                my = u[iy, ix, 2]
                vx = mx / h
                vy = my / h
                p = 0.5 * g * h * h
                Fx[iy, ix, 0] = mx
                Fx[iy, ix, 1] = mx * vx + p
                Fx[iy, ix, 2] = my * vx
                Fy[iy, ix, 0] = my
                Fy[iy, ix, 1] = mx * vy
                Fy[iy, ix, 2] = my * vy + p
    else:  # 2D Euler
        gam = params[2]
        for iy in range(ny):
            for ix in range(nx):
                rho = u[iy, ix, 0]
                mx = u[iy, ix, 1]
                my = u[iy, ix, 2]
                E = u[iy, ix, 3]
                vx = mx / rho
                vy = my / rho
                p = (gam - 1.0) * (E - 0.5 * (mx * mx + my * my) / rho)
                Fx[iy, ix, 0] = mx
                Fx[iy, ix, 1] = mx * vx + p
                Fx[iy, ix, 2] = my * vx
                Fx[iy, ix, 3] = (E + p) * vx
                Fy[iy, ix, 0] = my
                Fy[iy, ix, 1] = mx * vy
                Fy[iy, ix, 2] = my * vy + p
                Fy[iy, ix, 3] = (E + p) * vy


# ---------------------------------------------------------------------------
# fused semi-discrete right-hand sides
# ---------------------------------------------------------------------------

@njit(cache=True)
def rhs_1d(f, out, v, w, dx, eps, order, bc, model, params):
    """out = -v df/dx + (M(u) - f)/eps on a 1D grid.

    Returns the domain total of the transport term per component (the rate at
    which boundary fluxes change each conserved total; exactly telescoping,
    hence ~0, for periodic runs).
    """
    I, J, M = f.shape
    u = np.empty((I, M))
    for i in range(I):
        for m in range(M):
            acc = 0.0
            for j in range(J):
                acc += w[j] * f[i, j, m]
            u[i, m] = acc
    F = np.empty((I, M))
    _flux_1d(u, F, model, params)

    rate = np.zeros(M)
    ntot = I + 2 * GW
    fp = np.empty(ntot)
    fr = np.empty(ntot)
    d = np.empty(I)
    h = np.empty(I + 1)
    for j in range(J):
        vj = v[j]
        inv_vj = 1.0 / vj
        for m in range(M):
            for i in range(I):
                fp[GW + i] = f[i, j, m]
            fill_ghosts(fp, I, bc)
            deriv_slice(fp, d, h, fr, I, dx, vj, order)
            s = 0.0
            for i in range(I):
                t = vj * d[i]
                Mj = u[i, m] + F[i, m] * inv_vj
                out[i, j, m] = -t + (Mj - f[i, j, m]) / eps
                s += t
            rate[m] += -w[j] * s * dx
    return rate


@njit(cache=True)
def rhs_2d(f, out, vx, vy, w, pa, pb, dx, dy, eps, a_sq, order, bcx, bcy, model, params):
    """2D analogue of rhs_1d; transport is applied dimension by dimension."""
    ny, nx, J, M = f.shape
    npairs = pa.shape[0]
    u = np.empty((ny, nx, M))
    for iy in range(ny):
        for ix in range(nx):
            for m in range(M):
                acc = 0.0
                for k in range(npairs):
                    ja = pa[k]
                    jb = pb[k]
                    if ja == jb:
                        acc += w[ja] * f[iy, ix, ja, m]
                    else:
                        acc += w[ja] * f[iy, ix, ja, m] + w[jb] * f[iy, ix, jb, m]
                u[iy, ix, m] = acc
    Fx = np.empty((ny, nx, M))
    Fy = np.empty((ny, nx, M))
    _flux_2d(u, Fx, Fy, model, params)

    inv_a2 = 1.0 / a_sq
    rate = np.zeros(M)
    Dx = np.empty((ny, nx))
    Dy = np.empty((ny, nx))
    fpx = np.empty(nx + 2 * GW)
    frx = np.empty(nx + 2 * GW)
    hx = np.empty(nx + 1)
    dxl = np.empty(nx)
    fpy = np.empty(ny + 2 * GW)
    fry = np.empty(ny + 2 * GW)
    hy = np.empty(ny + 1)
    dyl = np.empty(ny)

    for j in range(J):
        vxj = vx[j]
        vyj = vy[j]
        for m in range(M):
            if vxj != 0.0:
                for iy in range(ny):
                    for ix in range(nx):
                        fpx[GW + ix] = f[iy, ix, j, m]
                    fill_ghosts(fpx, nx, bcx)
                    deriv_slice(fpx, dxl, hx, frx, nx, dx, vxj, order)
                    for ix in range(nx):
                        Dx[iy, ix] = dxl[ix]
            if vyj != 0.0:
                for ix in range(nx):
                    for iy in range(ny):
                        fpy[GW + iy] = f[iy, ix, j, m]
                    fill_ghosts(fpy, ny, bcy)
                    deriv_slice(fpy, dyl, hy, fry, ny, dy, vyj, order)
                    for iy in range(ny):
                        Dy[iy, ix] = dyl[iy]
            s = 0.0
            for iy in range(ny):
                for ix in range(nx):
                    if vxj != 0.0:
                        if vyj != 0.0:
                            t = vxj * Dx[iy, ix] + vyj * Dy[iy, ix]
                        else:
                            t = vxj * Dx[iy, ix]
                    elif vyj != 0.0:
                        t = vyj * Dy[iy, ix]
                    else:
                        t = 0.0
                    Mj = u[iy, ix, m] + (vxj * Fx[iy, ix, m] * inv_a2 + vyj * Fy[iy, ix, m] * inv_a2)
                    out[iy, ix, j, m] = -t + (Mj - f[iy, ix, j, m]) / eps
                    s += t
            rate[m] += -w[j] * s * dx * dy
    return rate
