"""Closed-form almost-equidistant configurations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import CONSTRUCTION_TOL, DISTINCT_EPS, PointSet, is_almost_equidistant, squared_distance_matrix
from .errors import ConstructionError, InvalidInputError

_RESEED_ATTEMPTS = 16


def simplex_circumradius(m: int) -> float:
    """Circumradius of a regular unit simplex with ``m + 1`` vertices."""
    return math.sqrt(m / (2.0 * (m + 1)))


def regular_unit_simplex(m: int, d: int) -> PointSet:
    """``m + 1`` pairwise unit-distance points in the first ``m`` axes of R^d, centered at 0.

    Vertex ``q`` sits over the centroid of vertices ``0..q-1`` at the height
    that makes its distance to each of them 1.
    """
    if not (1 <= m <= d):
        raise InvalidInputError(f"need 1 <= m <= d, got m={m}, d={d}")
    pts = np.zeros((m + 1, d))
    for q in range(1, m + 1):
        centroid = pts[:q].mean(axis=0)
        pts[q] = centroid
        pts[q, q - 1] = math.sqrt(1.0 - simplex_circumradius(q - 1) ** 2)
    pts -= pts.mean(axis=0)
    return PointSet(pts, dim=d)


def alpha_d(d: int) -> float:
    """Angle between two vertices of a regular d-simplex inscribed in the unit sphere."""
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    return 2.0 * math.asin(math.sqrt((d + 1) / (2.0 * d)))


def scale_k(alpha: float) -> float:
    """Scale turning unit vectors at angle ``alpha`` into points at distance 1."""
    if not (0.0 < alpha <= math.pi):
        raise InvalidInputError(f"alpha must lie in (0, pi], got {alpha!r}")
    return 1.0 / (2.0 * math.sin(alpha / 2.0))


def unit_sphere_simplex(d: int) -> np.ndarray:
    """The ``d + 1`` vertices of a regular d-simplex on the unit sphere of R^d."""
    pts = regular_unit_simplex(d, d).points
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def two_simplex_union(d: int, seed: int = 0) -> PointSet:
    """Two rotated copies of the scaled unit-sphere simplex: ``2d + 2`` points.

    Any three points include two from the same copy, and those are at unit
    distance, so the union is almost-equidistant for every rotation.
    """
    if d < 2:
        raise InvalidInputError("two_simplex_union needs d >= 2")
    base = unit_sphere_simplex(d) * scale_k(alpha_d(d))
    for attempt in range(_RESEED_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        second = base @ random_orthogonal(d, rng).T
        pts = np.vstack([base, second])
        V = squared_distance_matrix(pts)
        np.fill_diagonal(V, np.inf)
        if math.sqrt(V.min()) > DISTINCT_EPS:
            return PointSet(pts, dim=d)
    raise ConstructionError(
        f"two_simplex_union: copies collided in {_RESEED_ATTEMPTS} attempts (d={d}, seed={seed})"
    )


def moser_spindle() -> PointSet:
    """The 7-point Moser spindle in the plane (11 unit edges).

    Two unit rhombi share the apex at the origin; each far tip is at
    distance sqrt(3), and the second rhombus is turned until the tips are
    1 apart.
    """
    h = math.sqrt(3.0) / 2.0
    rhombus = np.array([[h, 0.5], [h, -0.5], [math.sqrt(3.0), 0.0]])
    turn = 2.0 * math.asin(1.0 / (2.0 * math.sqrt(3.0)))
    c, s = math.cos(turn), math.sin(turn)
    rot = np.array([[c, -s], [s, c]])
    pts = np.vstack([np.zeros((1, 2)), rhombus, rhombus @ rot.T])
    ps = PointSet(pts, dim=2)
    if not is_almost_equidistant(ps, CONSTRUCTION_TOL):
        raise ConstructionError("Moser spindle failed its own verification")
    return ps


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    d: int = 2
    m: Optional[int] = None
    seed: int = 0

    def build(self) -> PointSet:
        if self.kind == "moser_spindle":
            if self.d != 2:
                raise InvalidInputError("the Moser spindle lives in d = 2")
            return moser_spindle()
        if self.kind == "regular_simplex":
            return regular_unit_simplex(self.m if self.m is not None else self.d, self.d)
        if self.kind == "two_simplex_union":
            return two_simplex_union(self.d, self.seed)
        raise InvalidInputError(f"unknown construction kind {self.kind!r}")
