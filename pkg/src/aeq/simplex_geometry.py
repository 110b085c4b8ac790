"""Geometry of an apex point against a regular unit simplex of witnesses.

Given witnesses ``w_1..w_k`` pairwise at unit distance and an apex ``w_0``,
every point at unit distance from all witnesses lies on a sphere about the
witness barycenter ``o`` of radius ``sqrt((k+1)/(2k))``.  When the deviation
sum ``s = sum(|w_0 - w_i|^2 - 1)`` satisfies ``|s| >= sqrt(k)``, that sphere
meets the unit sphere about ``w_0`` in a sphere of radius at most
``1/sqrt(2)``, which caps the number of common unit neighbors at ``2d + 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import CONSTRUCTION_TOL, PointsLike, Tolerance, as_points
from .errors import GeometricInfeasibilityError, InvalidInputError

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def circumradius(k: int) -> float:
    """Circumradius of a regular unit simplex with ``k`` vertices."""
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    return math.sqrt((k - 1) / (2.0 * k))


def sphere_radius(k: int) -> float:
    """Radius of the sphere about the barycenter holding all common unit neighbors."""
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    return math.sqrt((k + 1) / (2.0 * k))


def _witnesses(ws) -> np.ndarray:
    arr = as_points(ws)
    if arr.shape[0] < 1:
        raise InvalidInputError("need at least one witness point")
    return arr


def _check_unit_simplex(ws: np.ndarray, unit_eps: float) -> None:
    k = ws.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            dist = float(np.linalg.norm(ws[i] - ws[j]))
            if abs(dist - 1.0) > unit_eps:
                raise InvalidInputError(
                    f"witnesses {i} and {j} are at distance {dist!r}, not a unit simplex"
                )


def common_sphere(ws: PointsLike, tol: Tolerance = CONSTRUCTION_TOL) -> Tuple[np.ndarray, float]:
    """Center and radius of the sphere containing all points at distance 1 from every witness."""
    arr = _witnesses(ws)
    _check_unit_simplex(arr, tol.unit_eps)
    return arr.mean(axis=0), sphere_radius(arr.shape[0])


def deviation_sum(w0, ws: PointsLike, zero_eps: float = 1e-9) -> Tuple[float, bool]:
    """``s = sum(|w0 - w_i|^2 - 1)`` and whether ``|s| >= sqrt(k)`` (with slack)."""
    arr = as_points(ws)
    w0 = np.asarray(w0, dtype=np.float64)
    if arr.shape[0] and arr.shape[1] != w0.shape[0]:
        raise InvalidInputError("apex and witnesses differ in dimension")
    k = arr.shape[0]
    if k == 0:
        return 0.0, False
    diff = arr - w0
    s = float(np.sum(np.einsum("ij,ij->i", diff, diff) - 1.0))
    return s, abs(s) >= math.sqrt(k) - zero_eps


def apex_identity_check(w0, ws: PointsLike, tol: Tolerance = CONSTRUCTION_TOL) -> float:
    """Residual of ``k(s + k) = k(k-1)/2 + k^2 x^2`` with ``x = |w0 - o|``."""
    o, _ = common_sphere(ws, tol)
    k = as_points(ws).shape[0]
    s, _ = deviation_sum(w0, ws, tol.zero_eps)
    x2 = float(np.sum((np.asarray(w0, dtype=np.float64) - o) ** 2))
    return abs(k * (s + k) - k * (k - 1) / 2.0 - k * k * x2)


def g(x: float, k: int) -> float:
    """Cosine of the angle at the apex, as a function of its distance ``x`` to the barycenter."""
    if not x > 0:
        raise InvalidInputError(f"x must be positive, got {x!r}")
    if k < 1:
        raise InvalidInputError("k must be at least 1")
    return (k - 1) / (4.0 * k * x) + x / 2.0


@dataclass(frozen=True)
class IntersectionRadius:
    r_prime: float
    x: float
    cos_theta: float
    s: float
    applicable: bool
    ok: Optional[bool]

    @property
    def margin(self) -> float:
        return INV_SQRT2 - self.r_prime


def intersection_radius(w0, ws: PointsLike, tol: Tolerance = CONSTRUCTION_TOL) -> IntersectionRadius:
    """Radius of ``S(w0, 1) ∩ S(o, r)``.

    When the deviation sum is applicable the radius is asserted to be at
    most ``1/sqrt(2)`` (``ok``); otherwise ``ok`` is ``None``.
    """
    o, r = common_sphere(ws, tol)
    w0 = np.asarray(w0, dtype=np.float64)
    x = float(np.linalg.norm(w0 - o))
    eps = tol.zero_eps
    if not (abs(r - 1.0) - eps <= x <= r + 1.0 + eps) or x <= 0.0:
        raise GeometricInfeasibilityError(
            f"spheres S(w0, 1) and S(o, {r:.6g}) do not meet: |w0 - o| = {x!r}"
        )
    cos_theta = min(1.0, max(-1.0, (1.0 + x * x - r * r) / (2.0 * x)))
    r_prime = math.sqrt(max(0.0, 1.0 - cos_theta * cos_theta))
    s, applicable = deviation_sum(w0, ws, eps)
    ok = (r_prime <= INV_SQRT2 + eps) if applicable else None
    return IntersectionRadius(r_prime, x, cos_theta, s, applicable, ok)


@dataclass(frozen=True)
class CommonNeighbors:
    indices: List[int]
    witnesses_used: List[int]
    s: float
    applicable: bool
    bound: int
    ok: Optional[bool]


def common_neighbors(
    ps: PointsLike,
    apex: int,
    witness_idxs: Sequence[int],
    tol: Tolerance = CONSTRUCTION_TOL,
    d: Optional[int] = None,
) -> CommonNeighbors:
    """Points at unit distance from the apex and every witness.

    Witnesses already at unit distance from the apex are dropped before the
    deviation sum is formed; the ``2d + 2`` cap is asserted only when the
    remaining witnesses make it applicable.
    """
    arr = as_points(ps)
    n, dim = arr.shape
    d = int(d if d is not None else dim)
    wit = [int(i) for i in witness_idxs]
    for i in [apex, *wit]:
        if not 0 <= i < n:
            raise InvalidInputError(f"index {i} out of range for {n} points")
    dist = np.linalg.norm(arr - arr[apex], axis=1)
    unit = lambda i: abs(dist[i] - 1.0) <= tol.unit_eps  # noqa: E731
    kept = [i for i in wit if not unit(i)]

    D = np.linalg.norm(arr[:, None, :] - arr[None, [apex, *wit], :], axis=2)
    members = np.all(np.abs(D - 1.0) <= tol.unit_eps, axis=1)
    indices = [int(i) for i in np.nonzero(members)[0]]

    s, applicable = deviation_sum(arr[apex], arr[kept], tol.zero_eps) if kept else (0.0, False)
    bound = 2 * d + 2
    ok = len(indices) <= bound if applicable else None
    return CommonNeighbors(indices, kept, s, applicable, bound, ok)
