"""Spectral certificates for squared distance matrices.

For any set of distinct points the squared distance matrix ``V`` has exactly
one positive eigenvalue, and ``U = V - J + I`` has at most one eigenvalue
above 1 with at least ``n - d - 2`` eigenvalues equal to 1.  On an
almost-equidistant set ``tr(U) = tr(U^3) = 0``.  This module checks those
facts numerically and provides the auxiliary tools (Gershgorin disks, Weyl
inequalities, the cubic-sum inequality) used when replaying the argument
on concrete inputs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    CONSTRUCTION_TOL,
    PointsLike,
    Tolerance,
    as_points,
    is_almost_equidistant,
    matrix_u,
    squared_distance_matrix,
    unit_mask,
)
from .errors import InvalidInputError, PreconditionError

RANK_RTOL = 1e-8
_ASYM_RTOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray
    scale: float

    def __len__(self):
        return len(self.values)


def sym_eigenvalues(M) -> Spectrum:
    """All eigenvalues of a real symmetric matrix, ascending."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix has non-finite entries")
    if M.size == 0:
        return Spectrum(np.zeros(0), 0.0)
    mag = float(np.max(np.abs(M)))
    if np.max(np.abs(M - M.T)) > _ASYM_RTOL * max(mag, 1e-300):
        raise InvalidInputError("matrix is not symmetric")
    values = np.linalg.eigvalsh((M + M.T) / 2.0)
    return Spectrum(values, float(np.max(np.abs(values))))


@dataclass
class Check:
    name: str
    passed: bool
    margin: Optional[float]
    detail: str = ""

    def to_dict(self) -> dict:
        margin = self.margin
        if margin is not None and not math.isfinite(margin):
            margin = None
        return {"name": self.name, "pass": bool(self.passed), "margin": margin}


@dataclass
class CertificateReport:
    n: int
    d: int
    positive_count_V: int
    above_one_count_U: int
    equal_one_count_U: int
    trace_U: float
    trace_U_cubed: float
    rank_W: int
    lambda_max_U: float
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        data = {k: v for k, v in asdict(self).items() if k != "checks"}
        data["checks"] = [c.to_dict() for c in self.checks]
        return data


def _u_scale(spec: Spectrum) -> float:
    # U is compared against the value 1, so its slack never drops below eig_eps.
    return max(spec.scale, 1.0)


def snapped_u(ps: PointsLike, unit_eps: float) -> np.ndarray:
    """U with entries of numerically unit pairs set to exactly zero.

    A pair counts as unit under the same rule as the unit-distance graph,
    ``| |v_i - v_j| - 1 | <= unit_eps``.
    """
    U = matrix_u(ps)
    U[unit_mask(ps, unit_eps)] = 0.0
    return U


def trace_cubed(U: np.ndarray) -> float:
    return float(np.sum((U @ U) * U.T))


def certify_distance_spectrum(
    ps: PointsLike, tol: Tolerance = CONSTRUCTION_TOL, d: Optional[int] = None
) -> CertificateReport:
    """Spectral report on ``V`` and ``U`` of a point set.

    Failures are recorded in the report's checks, never raised.
    """
    arr = as_points(ps)
    n = arr.shape[0]
    if n < 2:
        raise InvalidInputError("spectral certificate needs at least two points")
    d = int(d if d is not None else arr.shape[1])

    V = squared_distance_matrix(arr)
    sv = sym_eigenvalues(V)
    thr_v = tol.eig_eps * sv.scale
    pos_v = int(np.sum(sv.values > thr_v))
    second_v = sv.values[-2] if n >= 2 else -np.inf
    margin_v = min(sv.values[-1] - thr_v, thr_v - second_v)

    U = matrix_u(arr)
    su = sym_eigenvalues(U)
    thr_u = tol.eig_eps * _u_scale(su)
    above = int(np.sum(su.values > 1.0 + thr_u))
    equal = int(np.sum(np.abs(su.values - 1.0) <= thr_u))
    need_equal = n - d - 2
    margin_above = (1.0 + thr_u) - su.values[-2]

    rank = rank_w_bound(arr, d=d, tol=tol)
    gersh = gershgorin_disks(U, tol)
    Us = snapped_u(arr, tol.unit_eps)

    checks = [
        Check("one_positive_eigenvalue_V", pos_v == 1, float(margin_v)),
        Check("at_most_one_eigenvalue_above_one_U", above <= 1, float(margin_above)),
        Check("eigenvalue_one_multiplicity_U", equal >= need_equal, float(equal - need_equal)),
        Check("rank_W_at_most_d_plus_2", rank.ok, float(rank.bound - rank.rank)),
        Check("W_at_most_one_positive_eigenvalue", rank.one_positive_ok, rank.positive_margin),
        Check("gershgorin_containment_U", gersh.contained, gersh.margin),
    ]
    return CertificateReport(
        n=n,
        d=d,
        positive_count_V=pos_v,
        above_one_count_U=above,
        equal_one_count_U=equal,
        trace_U=float(np.trace(U)),
        trace_U_cubed=trace_cubed(Us),
        rank_W=rank.rank,
        lambda_max_U=float(su.values[-1]),
        checks=checks,
    )


@dataclass(frozen=True)
class TraceReport:
    trace_U: float
    trace_U_cubed: float
    bound: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.bound - abs(self.trace_U_cubed)


def _require_almost_equidistant(arr, tol: Tolerance, what: str):
    verdict = is_almost_equidistant(arr, tol)
    if not verdict.ok:
        raise PreconditionError(
            f"{what} requires an almost-equidistant set; triple {verdict.witness} has no unit pair",
            witness=verdict.witness,
        )


def trace_conditions(ps: PointsLike, tol: Tolerance = CONSTRUCTION_TOL) -> TraceReport:
    """``tr(U) = 0`` and ``tr(U^3) = 0`` on an almost-equidistant set."""
    arr = as_points(ps)
    _require_almost_equidistant(arr, tol, "trace_conditions")
    n = arr.shape[0]
    U = snapped_u(arr, tol.unit_eps)
    tr = float(np.trace(U))
    tr3 = trace_cubed(U)
    peak = float(np.max(np.abs(U))) if U.size else 0.0
    bound = tol.zero_eps * n * (1.0 + peak) ** 3
    return TraceReport(tr, tr3, bound, tr == 0.0 and abs(tr3) <= bound)


@dataclass(frozen=True)
class GershgorinDisk:
    center: float
    radius: float
    row: int


@dataclass(frozen=True)
class GershgorinResult:
    disks: Tuple[GershgorinDisk, ...]
    eigenvalues: np.ndarray
    contained: bool
    margin: float


def gershgorin_disks(M, tol: Tolerance = CONSTRUCTION_TOL) -> GershgorinResult:
    """Row disks of a real symmetric matrix and a check that they cover the spectrum."""
    M = np.asarray(M, dtype=np.float64)
    spec = sym_eigenvalues(M)
    centers = np.diag(M)
    radii = np.sum(np.abs(M), axis=1) - np.abs(centers)
    disks = tuple(
        GershgorinDisk(float(c), float(r), i) for i, (c, r) in enumerate(zip(centers, radii))
    )
    slack = tol.eig_eps * max(spec.scale, 1.0)
    if spec.values.size == 0:
        return GershgorinResult(disks, spec.values, True, 0.0)
    # slack of each eigenvalue inside its best disk
    room = radii[None, :] - np.abs(spec.values[:, None] - centers[None, :])
    best = room.max(axis=1)
    return GershgorinResult(disks, spec.values, bool(np.all(best >= -slack)), float(best.min()))


def gershgorin_witness_row(U, lam: float, tol: Tolerance = CONSTRUCTION_TOL) -> Tuple[int, float]:
    """Lowest row whose Gershgorin disk contains ``lam``.

    For a zero-diagonal matrix and ``lam > 0`` this is a row whose
    off-diagonal absolute sum is at least ``lam``.
    """
    U = np.asarray(U, dtype=np.float64)
    spec = sym_eigenvalues(U)
    slack = tol.eig_eps * max(spec.scale, 1.0)
    centers = np.diag(U)
    sums = np.sum(np.abs(U), axis=1) - np.abs(centers)
    ok = np.nonzero(np.abs(lam - centers) <= sums + slack)[0]
    if ok.size == 0:
        raise InvalidInputError(f"{lam!r} lies in no Gershgorin disk; it is not an eigenvalue")
    k = int(ok[0])
    return k, float(sums[k])


def same_sign_subset(row_values: Sequence[float], t: int) -> Optional[List[int]]:
    """Pick at most ``t`` same-sign entries whose sum exceeds ``sqrt(t)`` in magnitude.

    The ``2t`` entries of largest magnitude (ties by position) are split by
    sign; each sign class keeps its ``t`` largest members, and the class with
    the larger total wins.  Returns sorted positions, or ``None`` when the
    winning total does not exceed ``sqrt(t)``.
    """
    if t < 1:
        raise InvalidInputError("t must be a positive integer")
    vals = np.asarray(row_values, dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise InvalidInputError("row values must be finite")
    order = sorted(range(len(vals)), key=lambda i: (-abs(vals[i]), i))[: 2 * t]
    best: Optional[List[int]] = None
    best_total = -1.0
    for sign in (1.0, -1.0):
        cls = [i for i in order if np.sign(vals[i]) == sign][:t]
        total = abs(float(sum(vals[i] for i in cls)))
        if cls and total > best_total:
            best, best_total = cls, total
    if best is None or not best_total > math.sqrt(t):
        return None
    return sorted(best)


@dataclass(frozen=True)
class WeylVerdict:
    ok: bool
    worst_margin: float


def weyl_inequality_check(A, B, tol: Tolerance = CONSTRUCTION_TOL) -> WeylVerdict:
    """Check both Weyl eigenvalue inequality families for ``A + B``.

    With ascending spectra a, b, g of A, B, A+B (1-based):
    g_i >= a_j + b_{i-j+1} for i >= j, and g_i <= a_j + b_{i-j+n} for i <= j.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise InvalidInputError(f"size mismatch: {A.shape} vs {B.shape}")
    sa, sb, sg = sym_eigenvalues(A), sym_eigenvalues(B), sym_eigenvalues(A + B)
    a, b, g = sa.values, sb.values, sg.values
    n = len(a)
    if n == 0:
        return WeylVerdict(True, 0.0)
    # 0-based: lower family g[i] >= a[j] + b[i-j], upper g[i] <= a[j] + b[i-j+n-1]
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    low = i >= j
    lower = g[i[low]] - a[j[low]] - b[i[low] - j[low]]
    up = i <= j
    upper = a[j[up]] + b[i[up] - j[up] + n - 1] - g[i[up]]
    worst = float(min(lower.min(), upper.min()))
    slack = tol.eig_eps * max(sa.scale + sb.scale, 1e-300)
    return WeylVerdict(worst >= -slack, worst)


@dataclass(frozen=True)
class RankReport:
    rank: int
    bound: int
    ok: bool
    positive_count: int
    one_positive_ok: bool
    positive_margin: float


def rank_w_bound(
    ps: PointsLike, d: Optional[int] = None, tol: Tolerance = CONSTRUCTION_TOL
) -> RankReport:
    """Numeric rank of ``W = V - J`` against ``d + 2``, and its positive-eigenvalue count."""
    arr = as_points(ps)
    n = arr.shape[0]
    if n < 2:
        raise InvalidInputError("rank_w_bound needs at least two points")
    d = int(d if d is not None else arr.shape[1])
    W = squared_distance_matrix(arr) - 1.0
    sv = np.linalg.svd(W, compute_uv=False)
    rank = int(np.sum(sv > RANK_RTOL * sv[0])) if sv[0] > 0 else 0
    spec = sym_eigenvalues(W)
    thr = tol.eig_eps * spec.scale
    pos = int(np.sum(spec.values > thr))
    return RankReport(
        rank=rank,
        bound=d + 2,
        ok=rank <= d + 2,
        positive_count=pos,
        one_positive_ok=pos <= 1,
        positive_margin=float(thr - spec.values[-2]),
    )


@dataclass(frozen=True)
class CubicSumVerdict:
    applicable: bool
    holds: Optional[bool]
    l: float
    cube_sum: float
    bound: float


def cubic_sum_check(xs: Sequence[float], y: float, zero_eps: float = 1e-9) -> CubicSumVerdict:
    """The cubic-sum inequality: if every ``x_i >= -y`` and ``sum x_i = (m + l) y``
    with ``l >= 0`` then ``sum x_i^3 >= (m + 3l) y^3``.
    """
    if not y > 0:
        raise InvalidInputError("y must be positive")
    x = np.asarray(xs, dtype=np.float64)
    m = x.size
    l = float(x.sum()) / y - m
    cube_sum = float(np.sum(x**3))
    bound = (m + 3.0 * l) * y**3
    applicable = bool(np.all(x >= -y - zero_eps)) and l >= -zero_eps
    holds = cube_sum >= bound - zero_eps if applicable else None
    return CubicSumVerdict(applicable, holds, l, cube_sum, bound)


@dataclass(frozen=True)
class FirstCaseReport:
    k: int
    sum_neg: float
    sum_neg_cubed: float
    target: int
    deviation: float
    deviation_cubed: float
    bound: float
    passed: bool


def first_case_sums(ps: PointsLike, tol: Tolerance = CONSTRUCTION_TOL) -> FirstCaseReport:
    """Replay the bookkeeping when ``U`` has no eigenvalue above 1.

    With ``k`` eigenvalues below 1, the rest equal 1 and the trace identities
    give ``sum(-l_i) = sum(-l_i)^3 = n - k`` over the eigenvalues below 1.
    """
    arr = as_points(ps)
    _require_almost_equidistant(arr, tol, "first_case_sums")
    n = arr.shape[0]
    spec = sym_eigenvalues(snapped_u(arr, tol.unit_eps))
    scale = _u_scale(spec)
    thr = tol.eig_eps * scale
    if np.any(spec.values > 1.0 + thr):
        raise PreconditionError(
            f"first_case_sums requires no eigenvalue of U above 1; largest is {spec.values[-1]!r}"
        )
    low = spec.values[spec.values < 1.0 - thr]
    k = int(low.size)
    s1 = float(np.sum(-low))
    s3 = float(np.sum((-low) ** 3))
    target = n - k
    bound = tol.zero_eps * n * scale**3
    dev1, dev3 = abs(s1 - target), abs(s3 - target)
    return FirstCaseReport(k, s1, s3, target, dev1, dev3, bound, dev1 <= bound and dev3 <= bound)
