"""Point sets, distance matrices and the almost-equidistant predicate.

A point set is *almost-equidistant* when every three of its points contain
a pair at unit distance.  Everything else in the package is built on the
primitives defined here.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidInputError

#: Points closer than this are treated as duplicates.
DISTINCT_EPS = 1e-6

Triple = Tuple[int, int, int]


@dataclass(frozen=True)
class Tolerance:
    """Numeric slack used by the checks.

    unit_eps
        Absolute slack when deciding that a distance equals 1.
    eig_eps
        Eigenvalue comparison slack, relative to the spectral radius.
    zero_eps
        Slack for traces, identity residuals and other exact-zero claims.
    """

    unit_eps: float = 1e-9
    eig_eps: float = 1e-7
    zero_eps: float = 1e-9

    def __post_init__(self):
        for name in ("unit_eps", "eig_eps", "zero_eps"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 < value < 0.1):
                raise InvalidInputError(f"{name} must lie in (0, 0.1), got {value!r}")

    @classmethod
    def from_env(cls, unit_eps: float = 1e-9) -> "Tolerance":
        """Defaults, with ``AEQ_EIG_EPS`` / ``AEQ_ZERO_EPS`` overrides."""
        try:
            eig = float(os.environ.get("AEQ_EIG_EPS", cls.eig_eps))
            zero = float(os.environ.get("AEQ_ZERO_EPS", cls.zero_eps))
        except ValueError as exc:
            raise InvalidInputError(f"bad tolerance in environment: {exc}") from None
        return cls(unit_eps=unit_eps, eig_eps=eig, zero_eps=zero)


CONSTRUCTION_TOL = Tolerance()
SEARCH_TOL = Tolerance(unit_eps=1e-6)


def _as_float_matrix(points, dim=None) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.array(points, dtype=np.float64)
    else:
        rows = [list(p) if isinstance(p, (list, tuple, np.ndarray)) else p for p in points]
        lengths = {len(r) if isinstance(r, list) else -1 for r in rows}
        if -1 in lengths:
            raise InvalidInputError("every point must be a sequence of coordinates")
        if len(lengths) > 1:
            raise InvalidInputError("ragged point rows: dimension mismatch among points")
        try:
            arr = np.array(rows, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"non-numeric coordinate: {exc}") from None
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, dim or 0)
    if arr.ndim != 2:
        raise InvalidInputError(f"points must form a 2-d array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise InvalidInputError(
            f"dimension mismatch: declared dim {dim}, points have {arr.shape[1]} coordinates"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("coordinates must be finite")
    return arr


@dataclass(frozen=True)
class PointSet:
    """An ordered, immutable list of distinct points in R^dim."""

    dim: int
    points: np.ndarray = field(repr=False)

    def __init__(self, points, dim: Optional[int] = None):
        arr = _as_float_matrix(points, dim)
        if dim is None:
            dim = arr.shape[1]
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise InvalidInputError(f"dim must be a positive integer, got {dim!r}")
        if arr.shape[0] < 1:
            raise InvalidInputError("a point set needs at least one point")
        if arr.shape[0] > 1:
            gaps = np.sqrt(_pairwise_sq(arr)[np.triu_indices(arr.shape[0], 1)])
            if gaps.min() <= DISTINCT_EPS:
                k = int(np.argmin(gaps))
                i, j = (int(a[k]) for a in np.triu_indices(arr.shape[0], 1))
                raise InvalidInputError(
                    f"points {i} and {j} coincide (distance {gaps.min():.3g})"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "points", arr)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.dim, self.points.tobytes()))

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), allow_nan=False, **kwargs)

    @classmethod
    def from_dict(cls, data) -> "PointSet":
        if not isinstance(data, dict) or "dim" not in data or "points" not in data:
            raise InvalidInputError('point set JSON needs "dim" and "points" keys')
        dim = data["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int):
            raise InvalidInputError(f'"dim" must be an integer, got {dim!r}')
        pts = data["points"]
        if not isinstance(pts, list) or not all(isinstance(p, list) for p in pts):
            raise InvalidInputError('"points" must be a list of coordinate lists')
        for p in pts:
            if len(p) != dim:
                raise InvalidInputError(
                    f"ragged row: expected {dim} coordinates, got {len(p)}"
                )
            for c in p:
                if isinstance(c, bool) or not isinstance(c, (int, float)):
                    raise InvalidInputError(f"non-numeric coordinate {c!r}")
        return cls(pts, dim=dim)

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        return cls.from_dict(_loads_strict(text))


def _reject_constant(token):
    raise InvalidInputError(f"non-finite value {token} in JSON")


def _loads_strict(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed JSON: {exc}") from None


def read_pointset(path) -> PointSet:
    with open(path, encoding="utf-8") as fh:
        return PointSet.from_json(fh.read())


def write_pointset(ps: PointSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ps.to_json(indent=1))
        fh.write("\n")


PointsLike = Union[PointSet, np.ndarray, Sequence[Sequence[float]]]


def as_points(ps: PointsLike) -> np.ndarray:
    """Coordinates of ``ps`` as an (n, d) float array (no distinctness check)."""
    if isinstance(ps, PointSet):
        return ps.points
    return _as_float_matrix(ps)


def _pairwise_sq(arr: np.ndarray) -> np.ndarray:
    diff = arr[:, None, :] - arr[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def squared_distance_matrix(ps: PointsLike) -> np.ndarray:
    """The matrix of squared pairwise distances ``V[i, j] = |v_i - v_j|^2``.

    Exactly symmetric with an exactly zero diagonal.
    """
    arr = as_points(ps)
    V = _pairwise_sq(arr)
    V = np.triu(V, 1)
    return V + V.T


def matrix_u(ps: PointsLike) -> np.ndarray:
    """``U = V - J + I``: off-diagonal entries are squared distances minus one."""
    V = squared_distance_matrix(ps)
    U = V - 1.0
    np.fill_diagonal(U, 0.0)
    return U


@dataclass(frozen=True)
class UnitDistanceGraph:
    """Graph on point indices ``0..n-1`` whose edges join points at unit distance."""

    n: int
    edges: frozenset
    tolerance: float = 0.0

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]], tolerance: float = 0.0):
        norm = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidInputError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInputError(f"edge ({i}, {j}) out of range for n={n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "tolerance", float(tolerance))

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            A[i, j] = A[j, i] = True
        return A

    def neighbors(self) -> list:
        nbrs = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)


def unit_mask(ps: PointsLike, unit_eps: float) -> np.ndarray:
    """Boolean matrix of pairs at distance 1 within ``unit_eps`` (diagonal False)."""
    D = np.sqrt(squared_distance_matrix(ps))
    mask = np.abs(D - 1.0) <= unit_eps
    np.fill_diagonal(mask, False)
    return mask


def unit_distance_graph(ps: PointsLike, tol: Tolerance = CONSTRUCTION_TOL) -> UnitDistanceGraph:
    mask = unit_mask(ps, tol.unit_eps)
    ii, jj = np.nonzero(np.triu(mask, 1))
    return UnitDistanceGraph(mask.shape[0], zip(ii.tolist(), jj.tolist()), tol.unit_eps)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Optional[Triple] = None

    def __bool__(self):
        return self.ok


def _first_free_triple(non_edge: np.ndarray) -> Optional[Triple]:
    n = non_edge.shape[0]
    idx = np.arange(n)
    for i in range(n - 2):
        for j in np.nonzero(non_edge[i] & (idx > i))[0]:
            ks = np.nonzero(non_edge[i] & non_edge[j] & (idx > j))[0]
            if ks.size:
                return (i, int(j), int(ks[0]))
    return None


def is_almost_equidistant(ps: PointsLike, tol: Tolerance = CONSTRUCTION_TOL) -> Verdict:
    """Check that every triple contains a unit-distance pair.

    On failure the lexicographically smallest violating triple is returned
    as the witness.
    """
    mask = unit_mask(ps, tol.unit_eps)
    if mask.shape[0] < 3:
        return Verdict(True)
    non_edge = ~mask
    np.fill_diagonal(non_edge, False)
    witness = _first_free_triple(non_edge)
    return Verdict(witness is None, witness)


def barycenter_identity_residual(X: PointsLike, Y: PointsLike) -> float:
    """Absolute residual of the barycenter identity for two equal-size point lists.

    sum_{i,j} |x_i - y_j|^2
        = sum_{i<j} |x_i - x_j|^2 + sum_{i<j} |y_i - y_j|^2 + n^2 |x_bar - y_bar|^2

    Duplicate points are allowed.
    """
    X = as_points(X)
    Y = as_points(Y)
    if X.shape != Y.shape:
        raise InvalidInputError(
            f"X and Y must have equal cardinality and dimension, got {X.shape} and {Y.shape}"
        )
    n = X.shape[0]
    diff = X[:, None, :] - Y[None, :, :]
    lhs = float(np.sum(diff * diff))
    within = lambda A: float(np.sum(np.triu(_pairwise_sq(A), 1)))  # noqa: E731
    gap = X.mean(axis=0) - Y.mean(axis=0)
    rhs = within(X) + within(Y) + n * n * float(gap @ gap)
    return abs(lhs - rhs)


def diameter(ps: PointsLike) -> float:
    arr = as_points(ps)
    if arr.shape[0] < 2:
        raise InvalidInputError("diameter needs at least two points")
    return float(np.sqrt(squared_distance_matrix(arr).max()))
