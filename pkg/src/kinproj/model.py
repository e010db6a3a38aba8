"""Conservation-law models: fluxes, wave speeds, equations of state, Maxwellians.

State arrays carry the conserved components in the trailing axis, so a field is
``u[..., m]`` with ``m < model.M``. Flux evaluation is vectorized over the
leading axes. Each model also knows how to lift a macroscopic state to the
kinetic equilibrium (Maxwellian) of a discrete velocity set:

* 1D, two velocities ``+-sigma``: ``M_j(u) = u + F(u)/v_j``
* 2D, orthogonal velocities:      ``M_j(u) = u + vx_j F^x(u)/a2 + vy_j F^y(u)/a2``

Both choices reproduce ``<M> = u`` and ``<v M> = F(u)`` exactly for the
velocity sets built in :mod:`kinproj.velocity`; ``check_moments`` verifies this
numerically at startup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZeroVelocity, MomentConditionError, NonPhysicalState

# Integer ids used by the compiled kernels to select flux formulas.
ADVECTION1D, BURGERS1D, EULER1D, ADVECTION2D, SHALLOW_WATER2D, EULER2D = range(6)


@dataclass(frozen=True)
class FluxModel:
    """Base class; concrete models fix component count M and dimension D."""

    name: str
    M: int
    D: int
    code: int

    #: wave speeds depend on the state (False lets drivers skip per-step checks)
    u_dependent_speed = True

    def flux(self, u: np.ndarray) -> np.ndarray:
        """All flux components, shape ``u.shape + (D,)``."""
        return np.stack([self.flux_d(u, d) for d in range(self.D)], axis=-1)

    def flux_d(self, u: np.ndarray, d: int) -> np.ndarray:
        raise NotImplementedError

    def pressure(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError(f"{self.name} has no equation of state")

    def max_wave_speed(self, u: np.ndarray) -> np.ndarray:
        """Per-dimension sup over the field of the spectral radius of dF/du."""
        raise NotImplementedError

    def admissible(self, u: np.ndarray) -> bool:
        """True when the field stays in the model's physical domain."""
        return bool(np.all(np.isfinite(u)))

    def kernel_params(self) -> np.ndarray:
        """Constants handed to the compiled kernels: [a, b, gamma, g]."""
        return np.zeros(4)

    def maxwellian(self, u: np.ndarray, vset) -> np.ndarray:
        """Equilibrium distribution, shape ``u.shape[:-1] + (J, M)``."""
        u = np.asarray(u, dtype=float)
        F = self.flux(u)  # (..., M, D)
        out = np.empty(u.shape[:-1] + (vset.J, self.M))
        for j in range(vset.J):
            out[..., j, :] = maxwellian(self, u, vset.v[j], vset)
        return out


# ---------------------------------------------------------------------------
# concrete models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Advection1D(FluxModel):
    a: float = 1.0

    u_dependent_speed = False

    def __init__(self, a: float = 1.0):
        object.__setattr__(self, "a", float(a))
        super().__init__(name="advection1d", M=1, D=1, code=ADVECTION1D)

    def flux_d(self, u, d=0):
        return self.a * np.asarray(u, dtype=float)

    def max_wave_speed(self, u):
        return np.array([abs(self.a)])

    def kernel_params(self):
        return np.array([self.a, 0.0, 0.0, 0.0])


@dataclass(frozen=True)
class Burgers1D(FluxModel):
    def __init__(self):
        super().__init__(name="burgers1d", M=1, D=1, code=BURGERS1D)

    def flux_d(self, u, d=0):
        u = np.asarray(u, dtype=float)
        return 0.5 * u * u

    def max_wave_speed(self, u):
        return np.array([float(np.max(np.abs(u)))])


@dataclass(frozen=True)
class Euler1D(FluxModel):
    gamma: float = 1.4

    def __init__(self, gamma: float = 1.4):
        object.__setattr__(self, "gamma", float(gamma))
        super().__init__(name="euler1d", M=3, D=1, code=EULER1D)

    def pressure(self, u):
        u = np.asarray(u, dtype=float)
        rho, mom, E = u[..., 0], u[..., 1], u[..., 2]
        return (self.gamma - 1.0) * (E - 0.5 * mom * mom / rho)

    def flux_d(self, u, d=0):
        u = np.asarray(u, dtype=float)
        rho, mom, E = u[..., 0], u[..., 1], u[..., 2]
        if np.any(rho <= 0.0):
            raise NonPhysicalState("euler1d flux needs rho > 0")
        v = mom / rho
        p = self.pressure(u)
        return np.stack([mom, mom * v + p, (E + p) * v], axis=-1)

    def sound_speed(self, u):
        rho = np.asarray(u, dtype=float)[..., 0]
        p = self.pressure(u)
        arg = self.gamma * p / rho
        if np.any(arg < 0.0):
            raise NonPhysicalState("negative sound-speed argument (p < 0 or rho < 0)")
        return np.sqrt(arg)

    def max_wave_speed(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u[..., 0] <= 0.0):
            raise NonPhysicalState("euler1d wave speed needs rho > 0")
        v = u[..., 1] / u[..., 0]
        return np.array([float(np.max(np.abs(v) + self.sound_speed(u)))])

    def admissible(self, u):
        u = np.asarray(u, dtype=float)
        return bool(
            np.all(np.isfinite(u))
            and np.all(u[..., 0] > 0.0)
            and np.all(self.pressure(u) > 0.0)
        )

    def kernel_params(self):
        return np.array([0.0, 0.0, self.gamma, 0.0])


@dataclass(frozen=True)
class Advection2D(FluxModel):
    a: float = 1.0
    b: float = 1.0

    u_dependent_speed = False

    def __init__(self, a: float = 1.0, b: float = 1.0):
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "b", float(b))
        super().__init__(name="advection2d", M=1, D=2, code=ADVECTION2D)

    def flux_d(self, u, d):
        speed = self.a if d == 0 else self.b
        return speed * np.asarray(u, dtype=float)

    def max_wave_speed(self, u):
        return np.array([abs(self.a), abs(self.b)])

    def kernel_params(self):
        return np.array([self.a, self.b, 0.0, 0.0])


@dataclass(frozen=True)
class ShallowWater2D(FluxModel):
    g: float = 1.0

    def __init__(self, g: float = 1.0):
        object.__setattr__(self, "g", float(g))
        super().__init__(name="shallow_water2d", M=3, D=2, code=SHALLOW_WATER2D)

    def pressure(self, u):
        h = np.asarray(u, dtype=float)[..., 0]
        return 0.5 * self.g * h * h

    def flux_d(self, u, d):
        u = np.asarray(u, dtype=float)
        h, mx, my = u[..., 0], u[..., 1], u[..., 2]
        if np.any(h <= 0.0):
            raise NonPhysicalState("shallow water flux needs h > 0")
        p = self.pressure(u)
        if d == 0:
            vx = mx / h
            return np.stack([mx, mx * vx + p, my * vx], axis=-1)
        vy = my / h
        return np.stack([my, mx * vy, my * vy + p], axis=-1)

    def max_wave_speed(self, u):
        u = np.asarray(u, dtype=float)
        h = u[..., 0]
        if np.any(h <= 0.0):
            raise NonPhysicalState("shallow water wave speed needs h > 0")
        c = np.sqrt(self.g * h)
        sx = float(np.max(np.abs(u[..., 1] / h) + c))
        sy = float(np.max(np.abs(u[..., 2] / h) + c))
        return np.array([sx, sy])

    def admissible(self, u):
        u = np.asarray(u, dtype=float)
        return bool(np.all(np.isfinite(u)) and np.all(u[..., 0] > 0.0))

    def kernel_params(self):
        return np.array([0.0, 0.0, 0.0, self.g])


@dataclass(frozen=True)
class Euler2D(FluxModel):
    gamma: float = 1.4

    def __init__(self, gamma: float = 1.4):
        object.__setattr__(self, "gamma", float(gamma))
        super().__init__(name="euler2d", M=4, D=2, code=EULER2D)

    def pressure(self, u):
        u = np.asarray(u, dtype=float)
        rho, mx, my, E = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
        return (self.gamma - 1.0) * (E - 0.5 * (mx * mx + my * my) / rho)

    def flux_d(self, u, d):
        u = np.asarray(u, dtype=float)
        rho, mx, my, E = u[..., 0], u[..., 1], u[..., 2], u[..., 3]
        if np.any(rho <= 0.0):
            raise NonPhysicalState("euler2d flux needs rho > 0")
        p = self.pressure(u)
        if d == 0:
            vx = mx / rho
            return np.stack([mx, mx * vx + p, my * vx, (E + p) * vx], axis=-1)
        vy = my / rho
        return np.stack([my, mx * vy, my * vy + p, (E + p) * vy], axis=-1)

    def sound_speed(self, u):
        rho = np.asarray(u, dtype=float)[..., 0]
        p = self.pressure(u)
        arg = self.gamma * p / rho
        if np.any(arg < 0.0):
            raise NonPhysicalState("negative sound-speed argument (p < 0 or rho < 0)")
        return np.sqrt(arg)

    def max_wave_speed(self, u):
        u = np.asarray(u, dtype=float)
        rho = u[..., 0]
        if np.any(rho <= 0.0):
            raise NonPhysicalState("euler2d wave speed needs rho > 0")
        c = self.sound_speed(u)
        sx = float(np.max(np.abs(u[..., 1] / rho) + c))
        sy = float(np.max(np.abs(u[..., 2] / rho) + c))
        return np.array([sx, sy])

    def admissible(self, u):
        u = np.asarray(u, dtype=float)
        return bool(
            np.all(np.isfinite(u))
            and np.all(u[..., 0] > 0.0)
            and np.all(self.pressure(u) > 0.0)
        )

    def kernel_params(self):
        return np.array([0.0, 0.0, self.gamma, 0.0])


MODEL_NAMES = (
    "advection1d",
    "burgers1d",
    "euler1d",
    "advection2d",
    "shallow_water2d",
    "euler2d",
)


_FACTORIES = {
    "advection1d": Advection1D,
    "burgers1d": Burgers1D,
    "euler1d": Euler1D,
    "advection2d": Advection2D,
    "shallow_water2d": ShallowWater2D,
    "euler2d": Euler2D,
}


def make_model(name: str, **params) -> FluxModel:
    """Build a model by config name; unknown names or params are rejected."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}") from None
    try:
        return factory(**params)
    except TypeError:
        raise ValueError(f"bad params for {name}: {sorted(params)}") from None


# ---------------------------------------------------------------------------
# operation-style wrappers
# ---------------------------------------------------------------------------

def flux(model: FluxModel, u: np.ndarray) -> np.ndarray:
    """F(u), shape ``u.shape + (D,)``; raises NonPhysicalState when required."""
    return model.flux(u)


def equation_of_state(model: FluxModel, u: np.ndarray) -> np.ndarray:
    """Pressure of the state; may be negative, the caller decides severity."""
    return model.pressure(u)


def max_wave_speed(model: FluxModel, u_field: np.ndarray) -> np.ndarray:
    """Per-dimension bound on the characteristic speeds over the field."""
    return model.max_wave_speed(u_field)


def maxwellian(model: FluxModel, u: np.ndarray, v, vset) -> np.ndarray:
    """Equilibrium value for one discrete velocity ``v`` of ``vset``."""
    u = np.asarray(u, dtype=float)
    if model.D == 1:
        vj = float(np.asarray(v).reshape(-1)[0])
        if vj == 0.0:
            raise DivisionByZeroVelocity("Maxwellian u + F(u)/v needs v != 0")
        return u + model.flux_d(u, 0) / vj
    vx, vy = (float(c) for c in np.asarray(v).reshape(-1))
    if vset.a_sq <= 0.0:
        raise NonPhysicalState("2D Maxwellian needs positive second moment a^2")
    inv_a2 = 1.0 / vset.a_sq
    return u + (vx * model.flux_d(u, 0) * inv_a2 + vy * model.flux_d(u, 1) * inv_a2)


def moment_residual(model: FluxModel, u: np.ndarray, vset) -> float:
    """Max relative defect of <M> = u and <v^d M> = F^d over the given states."""
    u = np.asarray(u, dtype=float)
    M = model.maxwellian(u, vset)  # (..., J, M)
    w = vset.w
    scale = max(1.0, float(np.max(np.abs(u))))
    res = float(np.max(np.abs(np.einsum("j,...jm->...m", w, M) - u))) / scale
    for d in range(model.D):
        Fd = model.flux_d(u, d)
        vd = vset.v[:, d] if vset.v.ndim == 2 else vset.v
        mom = np.einsum("j,...jm->...m", w * vd, M)
        fscale = max(1.0, float(np.max(np.abs(Fd))))
        res = max(res, float(np.max(np.abs(mom - Fd))) / fscale)
    return res


def check_moments(model: FluxModel, u: np.ndarray, vset, tol: float = 1e-10) -> float:
    """Abort when the compatibility conditions fail beyond ``tol``."""
    res = moment_residual(model, u, vset)
    if res > tol:
        raise MomentConditionError(
            f"moment conditions violated for {model.name}: residual {res:.3e} > {tol:.1e}"
        )
    return res
