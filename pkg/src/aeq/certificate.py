"""Full certificate: spectral checks plus the graph-side consequences."""

from __future__ import annotations

from typing import Optional

from .core import CONSTRUCTION_TOL, PointsLike, Tolerance, as_points, is_almost_equidistant, unit_distance_graph
from .graph import bound_theorem, diameter_bound_check, max_clique, non_neighbor_violations
from .spectral import Check, CertificateReport, certify_distance_spectrum, trace_conditions


def certify(
    ps: PointsLike, tol: Tolerance = CONSTRUCTION_TOL, d: Optional[int] = None
) -> CertificateReport:
    """Run every check that applies to ``ps``.

    The spectral checks hold for any distinct points.  The trace, degree,
    clique, cardinality and diameter checks need an almost-equidistant set;
    if the set is not one, that failure is the only check reported for them.
    """
    arr = as_points(ps)
    d = int(d if d is not None else arr.shape[1])
    report = certify_distance_spectrum(arr, tol, d=d)
    n = arr.shape[0]

    verdict = is_almost_equidistant(arr, tol)
    report.checks.append(Check("almost_equidistant", verdict.ok, None, str(verdict.witness or "")))
    if not verdict.ok:
        return report

    tr = trace_conditions(arr, tol)
    report.checks.append(Check("trace_U_cubed_zero", tr.passed, tr.margin))

    g = unit_distance_graph(arr, tol)
    bad = non_neighbor_violations(g, d)
    worst = int(max(n - 1 - g.degrees(), default=0))
    report.checks.append(Check("at_most_d_plus_1_non_neighbors", not bad, float(d + 1 - worst)))

    omega = max_clique(g)
    report.checks.append(Check("max_clique_at_most_d_plus_1", omega <= d + 1, float(d + 1 - omega)))

    cap = bound_theorem(d)
    report.checks.append(Check("theorem_bound", n <= cap + tol.zero_eps, cap - n))
    if n >= 2:
        dv = diameter_bound_check(arr, tol, d=d)
        report.checks.append(Check("diameter_bound", dv.ok, dv.margin))
    return report
