"""Discrete velocity sets and moment brackets.

1D uses the two-point Gauss-Hermite set ``v = (-sigma, +sigma)`` with weights
``1/2``. 2D uses the orthogonal-velocities construction: ``J = 4*R*S``
velocities on ``R`` rings of radius ``(r/R) v_max`` at angles ``s/S * pi/2``,
with uniform weights ``1/J``.

The 2D angles are evaluated through exact quadrant reduction (cos/sin at
multiples of pi/2 are exactly 0 or +-1, and ``sin(phi)`` is defined as
``cos(pi/2 - phi)`` bitwise). As a result the set is exactly closed under the
reflection ``(vx, vy) -> (vy, vx)``; ``pair_a``/``pair_b`` record the matching
index pairs so brackets can be accumulated in a reflection-invariant order.
That ordering is what lets solutions of diagonally symmetric 2D problems stay
symmetric to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidSigma, ShapeMismatch


@dataclass(frozen=True)
class VelocitySet:
    D: int
    J: int
    v: np.ndarray  # (J, D)
    w: np.ndarray  # (J,)
    sigma: Optional[float] = None  # 1D only
    a_sq: Optional[float] = None  # 2D only: <(v^x)^2> = <(v^y)^2>
    v_max: Optional[float] = None  # 2D only
    R: Optional[int] = None
    S: Optional[int] = None
    pair_a: Optional[np.ndarray] = None  # 2D reflection pairs, pair_a <= pair_b
    pair_b: Optional[np.ndarray] = None

    def __post_init__(self):
        self.v.setflags(write=False)
        self.w.setflags(write=False)
        assert abs(float(np.sum(self.w)) - 1.0) <= 1e-14, "weights must sum to 1"
        if self.D == 1:
            # velocities symmetric: v_{J-j+1} = -v_j, exactly
            assert np.array_equal(self.v[::-1], -self.v)

    @property
    def speeds(self) -> np.ndarray:
        """Per-dimension dominating speed: sigma in 1D, v_max in 2D."""
        if self.D == 1:
            return np.array([self.sigma])
        return np.array([self.v_max, self.v_max])


def gauss_hermite_pair(sigma: float) -> VelocitySet:
    """Two-point set ``{(-sigma, 1/2), (+sigma, 1/2)}``."""
    sigma = float(sigma)
    if sigma <= 0.0:
        raise InvalidSigma(f"sigma must be positive, got {sigma}")
    v = np.array([[-sigma], [sigma]])
    w = np.array([0.5, 0.5])
    return VelocitySet(D=1, J=2, v=v, w=w, sigma=sigma)


def _quarter_cosines(S: int) -> np.ndarray:
    """cos(b/S * pi/2) for b = 0..S with exact endpoint values."""
    cb = np.empty(S + 1)
    cb[0] = 1.0
    cb[S] = 0.0
    for b in range(1, S):
        cb[b] = math.cos(0.5 * math.pi * b / S)
    return cb


def orthogonal_velocities(R: int, S: int, v_max: float) -> VelocitySet:
    """2D set of ``4*R*S`` velocities with uniform weights ``1/J``."""
    if R < 1 or S < 1:
        raise ValueError("R and S must be >= 1")
    v_max = float(v_max)
    if v_max <= 0.0:
        raise ValueError("v_max must be positive")
    J = 4 * R * S
    cb = _quarter_cosines(S)
    v = np.empty((J, 2))
    for r in range(1, R + 1):
        radius = (r / R) * v_max
        for s in range(1, 4 * S + 1):
            q, b = divmod(s, S)
            cphi = cb[b]
            sphi = cb[S - b]  # sin(phi) == cos(pi/2 - phi), bitwise
            q = q % 4
            if q == 0:
                c, sn = cphi, sphi
            elif q == 1:
                c, sn = -sphi, cphi
            elif q == 2:
                c, sn = -cphi, -sphi
            else:
                c, sn = sphi, -cphi
            j = (r - 1) * 4 * S + (s - 1)
            v[j, 0] = radius * c
            v[j, 1] = radius * sn
    w = np.full(J, 1.0 / J)

    a_x2 = float(np.sum(w * v[:, 0] ** 2))
    a_y2 = float(np.sum(w * v[:, 1] ** 2))
    assert abs(a_x2 - a_y2) <= 1e-13 * max(1.0, a_x2)

    # reflection (vx,vy) -> (vy,vx) permutes the set; record the pairing
    pair_a, pair_b = _reflection_pairs(v)
    return VelocitySet(
        D=2, J=J, v=v, w=w, a_sq=a_x2, v_max=v_max, R=R, S=S,
        pair_a=pair_a, pair_b=pair_b,
    )


def _reflection_pairs(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    J = v.shape[0]
    mirror = np.full(J, -1, dtype=np.int64)
    for j in range(J):
        for k in range(J):
            if v[k, 0] == v[j, 1] and v[k, 1] == v[j, 0]:
                mirror[j] = k
                break
    if np.any(mirror < 0):
        # set not exactly closed under the swap; fall back to identity pairs
        return np.arange(J, dtype=np.int64), np.arange(J, dtype=np.int64)
    pa, pb = [], []
    seen = np.zeros(J, dtype=bool)
    for j in range(J):
        if seen[j]:
            continue
        k = mirror[j]
        seen[j] = seen[k] = True
        pa.append(min(j, k))
        pb.append(max(j, k))
    return np.array(pa, dtype=np.int64), np.array(pb, dtype=np.int64)


def v_max_bound(model, u_field: np.ndarray, R: int) -> int:
    """Smallest integer speed satisfying the 2D stability bound.

    Evaluates ``v_max^2 >= 12 R^2 (|dF^x/du|^2 + |dF^y/du|^2) / ((R+1)(2R+1))``
    with the Jacobian norms replaced by the per-dimension characteristic speed
    bounds of the model on the given field.
    """
    if model.D != 2:
        raise ValueError("v_max bound applies to 2D models")
    s = model.max_wave_speed(u_field)
    bound_sq = 12.0 * R * R * float(s[0] ** 2 + s[1] ** 2) / ((R + 1) * (2 * R + 1))
    return int(math.ceil(math.sqrt(bound_sq)))


def bracket(f: np.ndarray, vset: VelocitySet, moment=None) -> np.ndarray:
    """Weighted velocity average ``sum_j w_j phi(v_j) f[..., j, :]``.

    ``moment`` selects phi: ``None`` -> 1, an int ``d`` -> ``v^d``, a pair
    ``(d, d')`` -> ``v^d v^d'``.
    """
    f = np.asarray(f)
    if f.ndim < 2 or f.shape[-2] != vset.J:
        raise ShapeMismatch(
            f"expected velocity axis of length {vset.J}, got shape {f.shape}"
        )
    wj = vset.w
    if moment is not None:
        if np.isscalar(moment):
            wj = wj * vset.v[:, int(moment)]
        else:
            d, dp = moment
            wj = wj * vset.v[:, int(d)] * vset.v[:, int(dp)]
    return np.einsum("j,...jm->...m", wj, f)


def bracket_paired(f: np.ndarray, vset: VelocitySet) -> np.ndarray:
    """Plain bracket, accumulated in reflection-invariant pair order (2D)."""
    f = np.asarray(f)
    if f.shape[-2] != vset.J:
        raise ShapeMismatch(
            f"expected velocity axis of length {vset.J}, got shape {f.shape}"
        )
    if vset.pair_a is None:
        return bracket(f, vset)
    w = vset.w
    out = np.zeros(f.shape[:-2] + (f.shape[-1],))
    for a, b in zip(vset.pair_a, vset.pair_b):
        if a == b:
            out += w[a] * f[..., a, :]
        else:
            out += w[a] * f[..., a, :] + w[b] * f[..., b, :]
    return out
