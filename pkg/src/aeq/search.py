"""Penalty-driven local search for large almost-equidistant configurations.

The objective sums, over every triple of points, the smallest squared
deviation ``(|v_i - v_j|^2 - 1)^2`` among the triple's three pairs.  It
vanishes exactly on almost-equidistant sets.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import List, Optional

import numpy as np

from .certificate import certify
from .constructions import regular_unit_simplex, two_simplex_union
from .core import (
    DISTINCT_EPS,
    SEARCH_TOL,
    PointSet,
    PointsLike,
    as_points,
    is_almost_equidistant,
    unit_mask,
)
from .errors import InvalidInputError, NumericFailureError
from .spectral import CertificateReport


TIE_EPS = 1e-15
GRAD_TOL = 1e-10
RESTART_RADIUS = 1.5


@dataclass(frozen=True)
class SearchConfig:
    d: int
    target_n: int
    seed: int = 0
    restarts: int = 32
    max_iters: int = 5000
    step_init: float = 0.05
    penalty_accept: float = 1e-12
    budget_seconds: Optional[float] = None

    def __post_init__(self):
        for name in ("d", "target_n", "restarts", "max_iters"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be at least 1")
        if not self.penalty_accept > 0:
            raise InvalidInputError("penalty_accept must be positive")
        if not self.step_init > 0:
            raise InvalidInputError("step_init must be positive")
        if self.seed < 0:
            raise InvalidInputError("seed must be non-negative")


@lru_cache(maxsize=64)
def _triples(n: int) -> np.ndarray:
    if n < 3:
        return np.zeros((0, 3), dtype=np.intp)
    return np.array(list(combinations(range(n), 3)), dtype=np.intp)


@lru_cache(maxsize=64)
def _triples_with(n: int, v: int) -> np.ndarray:
    T = _triples(n)
    return T[np.any(T == v, axis=1)]


def _deviation(X: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - X[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff) - 1.0


def _pair_costs(F: np.ndarray, T: np.ndarray) -> np.ndarray:
    i, j, k = T[:, 0], T[:, 1], T[:, 2]
    # pair order (i,j), (i,k), (j,k) is lexicographic for i < j < k
    return np.stack([F[i, j], F[i, k], F[j, k]], axis=1)


def _penalty(X: np.ndarray, T: np.ndarray) -> float:
    if T.shape[0] == 0:
        return 0.0
    F = _deviation(X) ** 2
    return float(_pair_costs(F, T).min(axis=1).sum())


def _gradient(X: np.ndarray, T: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    if T.shape[0] == 0:
        return np.zeros_like(X)
    dev = _deviation(X)
    C = _pair_costs(dev * dev, T)
    lowest = C.min(axis=1, keepdims=True)
    choice = np.argmax(C <= lowest + TIE_EPS, axis=1)
    a = np.where(choice == 2, T[:, 1], T[:, 0])
    b = np.where(choice == 0, T[:, 1], T[:, 2])
    weight = np.zeros((n, n))
    np.add.at(weight, (a, b), 1.0)
    weight += weight.T
    Wd = 4.0 * weight * dev
    return Wd.sum(axis=1)[:, None] * X - Wd @ X


def penalty(ps: PointsLike) -> float:
    """Sum over triples of the smallest squared unit-distance deviation in the triple."""
    X = as_points(ps)
    return _penalty(X, _triples(X.shape[0]))


def penalty_gradient(ps: PointsLike) -> np.ndarray:
    """Gradient of :func:`penalty`, charging each triple to its minimizing pair.

    Ties within ``1e-15`` go to the lexicographically smallest pair.
    """
    X = as_points(ps)
    return _gradient(X, _triples(X.shape[0]))


@dataclass
class OptimizeResult:
    points: np.ndarray
    penalty: float
    iterations: int
    history: List[float] = field(default_factory=list, repr=False)


def _descend(X, T, cfg: SearchConfig, movable=None, record=False) -> OptimizeResult:
    X = np.array(X, dtype=np.float64)
    f = _penalty(X, T)
    history = [f] if record else []
    if not math.isfinite(f):
        raise NumericFailureError("non-finite penalty at the starting point", last_points=X)
    step = cfg.step_init
    it = 0
    grad = None
    while it < cfg.max_iters and f > cfg.penalty_accept:
        if grad is None:
            grad = _gradient(X, T)
            if movable is not None:
                grad[~movable] = 0.0
            if np.linalg.norm(grad) <= GRAD_TOL:
                break
        it += 1
        trial = X - step * grad
        ft = _penalty(trial, T)
        if not math.isfinite(ft):
            raise NumericFailureError(f"non-finite penalty at iteration {it}", last_points=X)
        if ft < f:
            X, f, grad = trial, ft, None
            step *= 1.2
            if record:
                history.append(f)
        else:
            step *= 0.5
            if step < 1e-300:
                break
    return OptimizeResult(X, f, it, history)


def optimize(ps0: PointsLike, cfg: SearchConfig, record: bool = False) -> OptimizeResult:
    """Gradient descent with backtracking on :func:`penalty`.

    The step halves on a non-decrease and grows 1.2x on success; the loop
    stops at ``penalty_accept``, a vanishing gradient, or ``max_iters``.
    """
    X = as_points(ps0)
    if X.shape[1] != cfg.d:
        raise InvalidInputError(f"points live in R^{X.shape[1]}, config says d={cfg.d}")
    return _descend(X, _triples(X.shape[0]), cfg, record=record)


def _uniform_ball(rng: np.random.Generator, count: int, d: int, radius: float, center=None):
    direction = rng.standard_normal((count, d))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    r = radius * rng.random(count) ** (1.0 / d)
    pts = direction * r[:, None]
    return pts if center is None else pts + center


def _min_gap(X: np.ndarray) -> float:
    if X.shape[0] < 2:
        return math.inf
    D = _deviation(X) + 1.0
    np.fill_diagonal(D, math.inf)
    return math.sqrt(max(float(D.min()), 0.0))


def _accepted(X: np.ndarray, f: float, cfg: SearchConfig) -> bool:
    return (
        f <= cfg.penalty_accept
        and _min_gap(X) > DISTINCT_EPS
        and is_almost_equidistant(X, SEARCH_TOL).ok
    )


def greedy_extend(
    ps: PointsLike, cfg: SearchConfig, rng: Optional[np.random.Generator] = None
) -> Optional[PointSet]:
    """Try to add one point to a verified almost-equidistant set.

    Each of ``cfg.restarts`` candidates is drawn uniformly from the bounding
    ball inflated by 1, optimized alone against the triples it belongs to,
    then optimized jointly with the rest.  Returns the first extension that
    verifies, or ``None``.
    """
    X0 = as_points(ps)
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    n, d = X0.shape
    center = X0.mean(axis=0)
    radius = float(np.max(np.linalg.norm(X0 - center, axis=1))) + 1.0
    movable = np.zeros(n + 1, dtype=bool)
    movable[n] = True
    local = _triples_with(n + 1, n)
    full = _triples(n + 1)
    for _ in range(cfg.restarts):
        cand = _uniform_ball(rng, 1, d, radius, center)
        X = np.vstack([X0, cand])
        X = _descend(X, local, cfg, movable=movable).points
        res = _descend(X, full, cfg)
        if _accepted(res.points, res.penalty, cfg):
            return PointSet(res.points, dim=d)
    return None


def repair(X: np.ndarray, cfg: SearchConfig) -> Optional[np.ndarray]:
    """Drop points until the rest verifies, starting with the point in the most unit-free triples."""
    X = np.array(X)
    while X.shape[0] >= 1:
        if X.shape[0] <= 2:
            return X if _min_gap(X) > DISTINCT_EPS else X[:1]
        res = _descend(X, _triples(X.shape[0]), cfg)
        if _accepted(res.points, res.penalty, cfg):
            return res.points
        X = res.points
        free = ~unit_mask(X, SEARCH_TOL.unit_eps)
        np.fill_diagonal(free, False)
        T = _triples(X.shape[0])
        bad = T[free[T[:, 0], T[:, 1]] & free[T[:, 0], T[:, 2]] & free[T[:, 1], T[:, 2]]]
        counts = np.bincount(bad.ravel(), minlength=X.shape[0]) if bad.size else None
        if counts is None:
            # verification failed on distinctness or penalty alone
            D = _deviation(X) + 1.0
            np.fill_diagonal(D, math.inf)
            drop = int(np.unravel_index(np.argmin(D), D.shape)[1])
        else:
            drop = int(np.argmax(counts))
        X = np.delete(X, drop, axis=0)
    return None


def polish(X: np.ndarray, snap: float = 1e-4, iters: int = 20) -> np.ndarray:
    """Gauss-Newton refinement making every near-unit pair exactly unit.

    Returns the input unchanged if the refined set is not better.
    """
    X = np.array(X, dtype=np.float64)
    n, d = X.shape
    if n < 2:
        return X
    D = np.sqrt(np.maximum(_deviation(X) + 1.0, 0.0))
    ii, jj = np.nonzero(np.triu(np.abs(D - 1.0) <= snap, 1))
    if ii.size == 0:
        return X
    Y = X.copy()
    rows = np.arange(ii.size)
    for _ in range(iters):
        diff = Y[ii] - Y[jj]
        r = np.einsum("ij,ij->i", diff, diff) - 1.0
        if np.max(np.abs(r)) < 1e-15:
            break
        J = np.zeros((ii.size, n, d))
        J[rows, ii] = 2.0 * diff
        J[rows, jj] = -2.0 * diff
        step = np.linalg.lstsq(J.reshape(ii.size, n * d), -r, rcond=None)[0]
        Y = Y + step.reshape(n, d)
    T = _triples(n)
    if not np.all(np.isfinite(Y)) or _min_gap(Y) <= DISTINCT_EPS:
        return X
    if _penalty(Y, T) < _penalty(X, T) and is_almost_equidistant(Y, SEARCH_TOL).ok:
        return Y
    return X


@dataclass
class RestartSummary:
    restart: int
    seed: int
    iterations: int
    penalty: float
    n: int

    def to_dict(self) -> dict:
        return {
            "restart": self.restart,
            "seed": self.seed,
            "iterations": self.iterations,
            "penalty": self.penalty,
            "n": self.n,
        }


@dataclass
class SearchResult:
    best: PointSet
    n_achieved: int
    penalty: float
    verified: bool
    certificates: CertificateReport
    trace: List[RestartSummary]
    config: SearchConfig

    @property
    def target_met(self) -> bool:
        return self.verified and self.n_achieved >= self.config.target_n

    def to_dict(self) -> dict:
        return {
            "d": self.config.d,
            "target_n": self.config.target_n,
            "seed": self.config.seed,
            "best": self.best.to_dict(),
            "n_achieved": self.n_achieved,
            "penalty": self.penalty,
            "verified": self.verified,
            "certificates": self.certificates.to_dict(),
            "trace": [t.to_dict() for t in self.trace],
        }


def _seed_construction(d: int, seed: int) -> PointSet:
    if d == 1:
        return regular_unit_simplex(1, 1)
    return two_simplex_union(d, seed)


def _run_restart(index: int, cfg: SearchConfig, deadline: Optional[float]):
    rseed = cfg.seed + index
    rng = np.random.default_rng(rseed)
    iters = 0
    if index == 0:
        X = _seed_construction(cfg.d, cfg.seed).points
        if X.shape[0] > cfg.target_n:
            X = X[: max(cfg.target_n, 1)]
    else:
        start = _uniform_ball(rng, cfg.target_n, cfg.d, RESTART_RADIUS)
        res = _descend(start, _triples(cfg.target_n), cfg)
        iters += res.iterations
        X = repair(res.points, cfg)
        if X is None or X.shape[0] == 0:
            return None, iters
    while X.shape[0] < cfg.target_n:
        if deadline is not None and time.monotonic() > deadline:
            break
        ext = greedy_extend(X, cfg, rng)
        if ext is None:
            break
        X = ext.points
    return X, iters


def search(cfg: SearchConfig, progress=None) -> SearchResult:
    """Restart-driven search for an almost-equidistant set of ``cfg.target_n`` points.

    Restart 0 grows the two-simplex construction; later restarts start from
    random points in a ball of radius 1.5, prune to a verified subset and
    grow it.  Restarts run in index order and the search stops at the first
    one that reaches the target.  Ranking is by size, then penalty, then
    restart index.  ``progress`` is an optional text stream for one line per
    restart.
    """
    deadline = None if cfg.budget_seconds is None else time.monotonic() + cfg.budget_seconds
    trace: List[RestartSummary] = []
    best = None  # (key, points)
    for index in range(cfg.restarts):
        if deadline is not None and time.monotonic() > deadline and best is not None:
            break
        X, iters = _run_restart(index, cfg, deadline)
        if X is None:
            f, n = math.inf, 0
        else:
            X = polish(X)
            T = _triples(X.shape[0])
            f, n = _penalty(X, T), X.shape[0]
        trace.append(RestartSummary(index, cfg.seed + index, iters, f, n))
        if progress is not None:
            print(f"restart {index} seed {cfg.seed + index} n {n} penalty {f!r}", file=progress)
        if X is not None and n > 0:
            key = (-n, f, index)
            if best is None or key < best[0]:
                best = (key, X)
        if best is not None and -best[0][0] >= cfg.target_n:
            break

    if best is None:
        X = _seed_construction(cfg.d, cfg.seed).points
        f = penalty(X)
    else:
        X, f = best[1], best[0][1]
    ps = PointSet(X, dim=cfg.d)
    verified = bool(is_almost_equidistant(ps, SEARCH_TOL).ok and f <= cfg.penalty_accept)
    if ps.n >= 2:
        certs = certify(ps, SEARCH_TOL, d=cfg.d)
    else:
        certs = CertificateReport(ps.n, cfg.d, 0, 0, 0, 0.0, 0.0, 0, 0.0, [])
    return SearchResult(ps, ps.n, float(f), verified, certs, trace, cfg)
