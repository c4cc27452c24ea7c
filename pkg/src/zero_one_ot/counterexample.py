"""Grid discretisation of the strict-threshold order on ``[0, 2]``.

Points ``k/n`` carry ``mu`` and points ``1 + k/n`` carry ``nu`` (``k < n``);
``x`` is related to ``y`` iff ``x == y`` or ``y > x + 1``. In the continuum the
infimum of uncovered mass is 0 but no coupling attains it; on the grid the
optimum is attained and the uncovered mass shrinks with the resolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import (InvalidParameter, InvalidResolution, InvalidShift, MissingLabels,
                     OverlappingSupports, ValidationError)
from .potentials import Measure
from .relations import (GroundSet, Relation, RelationFamily, check_family, is_reflexive,
                        is_transitive, require_same_ground)
from .transport import Coupling, solve_dual_mincut, solve_primal_mass

__all__ = [
    "GridInstance", "SweepRow", "SweepReport", "ShiftResult", "MeanGapCertificate",
    "ApproximantRow", "build_grid_instance", "shift_coupling", "mean_gap_certificate",
    "closed_approximant", "resolution_sweep", "approximant_sweep",
]


@dataclass(frozen=True)
class GridInstance:
    resolution: int
    ground: GroundSet
    mu: Measure
    nu: Measure
    relation: Relation


@dataclass(frozen=True)
class ShiftResult:
    coupling: Coupling
    mass_on_R: Fraction


@dataclass(frozen=True)
class MeanGapCertificate:
    expectation_gap: Fraction
    delta: Optional[Fraction]
    lower_bound: Fraction


@dataclass(frozen=True)
class SweepRow:
    resolution: int
    primal_value: Fraction
    dual_value: Fraction
    dual_set_size: int
    shift_mass: Fraction
    certificate_bound: Fraction


COLUMNS = ("resolution", "primal_value", "dual_value", "dual_set_size", "shift_mass",
           "certificate_bound")


@dataclass(frozen=True)
class SweepReport:
    rows: tuple

    def violations(self) -> list:
        """Broken invariants as readable strings; empty when the report is sound."""
        out = []
        for row in self.rows:
            if row.primal_value != row.dual_value:
                out.append(f"n={row.resolution}: primal {row.primal_value} != dual {row.dual_value}")
            if row.certificate_bound > row.primal_value:
                out.append(f"n={row.resolution}: bound {row.certificate_bound} exceeds primal")
        by_n = {row.resolution: row.primal_value for row in self.rows}
        for n, value in by_n.items():
            if 2 * n in by_n and by_n[2 * n] > value:
                out.append(f"primal value grows from n={n} to n={2 * n}")
        return out


@dataclass(frozen=True)
class ApproximantRow:
    parameter: int
    pairs: int
    primal_value: Fraction


def build_grid_instance(n: int) -> GridInstance:
    """Two uniform blocks of ``n`` points each, on ``[0, 1)`` and ``[1, 2)``."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InvalidResolution(f"resolution must be a positive integer, got {n!r}")
    n = int(n)
    labels = [Fraction(k, n) for k in range(n)] + [1 + Fraction(k, n) for k in range(n)]
    ground = GroundSet.from_labels(labels)
    mu = Measure.uniform_on(ground, range(n))
    nu = Measure.uniform_on(ground, range(n, 2 * n))
    relation = Relation.threshold(ground, 1, strict=True)
    return GridInstance(n, ground, mu, nu, relation)


def shift_coupling(g: GridInstance, k: int) -> ShiftResult:
    """Pair ``j/n`` with ``1 + ((j + k) mod n)/n``, i.e. ``x -> 1 + frac(x + k/n)``.

    Exactly the ``n - k`` pairs that do not wrap land on the relation, so the
    covered mass is ``1 - k/n``.
    """
    n = g.resolution
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or not 1 <= k <= n:
        raise InvalidShift(f"shift must be an integer in [1, {n}], got {k!r}")
    share = Fraction(1, n)
    entries = {(j, n + (j + int(k)) % n): share for j in range(n)}
    coupling = Coupling(g.ground, entries, g.mu, g.nu)
    return ShiftResult(coupling, coupling.mass_on(g.relation))


def mean_gap_certificate(g: GridInstance) -> MeanGapCertificate:
    """Lower bound on uncovered mass from the gap between the two label means.

    With ``X ~ mu`` and ``Y ~ nu`` supported apart, mass on the relation forces
    ``Y - X >= delta``, the least label increase over related support pairs.
    If every support pair also has ``Y >= X``, then ``E[Y] - E[X] >= delta *
    pi(R)``, hence ``1 - pi(R) >= 1 - gap / delta``. When some support pair
    has ``Y < X`` the bound is weakened by the most negative increase ``m``:
    ``1 - (gap - m) / (delta - m)``. Without related pairs the bound is 1.
    """
    ground = require_same_ground(g.ground, g.mu.ground, g.nu.ground, g.relation.ground)
    if ground.labels is None:
        raise MissingLabels()
    src = list(g.mu.support)
    dst = list(g.nu.support)
    if set(src) & set(dst):
        raise OverlappingSupports()
    labels = ground.labels
    gap = g.nu.expectation() - g.mu.expectation()
    inc = g.relation.incidence
    related = [labels[j] - labels[i] for i in src for j in dst if inc[i, j]]
    if not related:
        return MeanGapCertificate(gap, None, Fraction(1))
    delta = min(related)
    slack = min(Fraction(0), min(labels[j] - labels[i] for i in src for j in dst))
    if delta <= slack:
        return MeanGapCertificate(gap, delta, Fraction(0))
    bound = 1 - (gap - slack) / (delta - slack)
    return MeanGapCertificate(gap, delta, min(Fraction(1), max(Fraction(0), bound)))


def closed_approximant(g: GridInstance, m: int) -> Relation:
    """Grid trace of ``x == y`` or ``y >= x + 1 + 1/m``.

    Nested in ``m``; on an ``n``-grid the member ``m = n`` already equals the
    strict relation, since ``y > x + 1`` iff ``y >= x + 1 + 1/n`` there.
    """
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise InvalidParameter(f"approximant index must be a positive integer, got {m!r}")
    return Relation.threshold(g.ground, 1 + Fraction(1, int(m)), strict=False)


def _row(n: int) -> SweepRow:
    g = build_grid_instance(n)
    primal = solve_primal_mass(g.mu, g.nu, g.relation)
    dual = solve_dual_mincut(g.mu, g.nu, g.relation)
    shift = shift_coupling(g, 1)
    bound = mean_gap_certificate(g).lower_bound
    return SweepRow(n, primal.uncovered, dual.value, len(dual.set), shift.mass_on_R, bound)


def resolution_sweep(resolutions: Iterable[int]) -> SweepReport:
    resolutions = list(resolutions)
    if not resolutions:
        raise InvalidParameter("resolution list must be nonempty")
    report = SweepReport(tuple(_row(n) for n in resolutions))
    problems = report.violations()
    if problems:
        raise ValidationError("sweep invariants", "; ".join(problems))
    return report


def approximant_sweep(g: GridInstance, parameters: Optional[Iterable[int]] = None):
    """Primal uncovered mass under each closed approximant, plus the family check.

    Defaults to the doubling sequence ``1, 2, 4, ...`` up to and including the
    first index at or beyond the resolution. Returns ``(rows, family_report)``.
    """
    if parameters is None:
        top = 1 << max(0, math.ceil(math.log2(g.resolution)))
        parameters = [1 << k for k in range(top.bit_length())]
    parameters = list(parameters)
    if not parameters:
        raise InvalidParameter("approximant list must be nonempty")
    members = [closed_approximant(g, m) for m in parameters]
    for rel in members:
        if not (is_reflexive(rel) and is_transitive(rel)):
            raise ValidationError("preorder", "closed approximant is not a preorder")
    rows = tuple(
        ApproximantRow(m, int(rel.incidence.sum()) - len(g.ground),
                       solve_primal_mass(g.mu, g.nu, rel).uncovered)
        for m, rel in zip(parameters, members))
    return rows, check_family(RelationFamily(g.ground, tuple(members)))
