"""Exact solvers for coupling problems on finite ground sets.

The zero-one problem (maximise ``pi(R)`` over couplings) is a bipartite max
flow; its min cut yields an optimal upper set. General costs go through an
exact min-cost flow. Rational data is cleared to integers with the least
common denominator before any flow is pushed, so every reported value is an
exact :class:`~fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _flow
from .errors import CertificateFailure, CostConditionsViolated, TooLarge
from .potentials import Measure, Potential, check_one_var_feasible, dual_objective
from .relations import (CostMatrix, GroundSet, IndexSet, Relation, is_upper_set,
                        require_preorder, require_same_ground, upper_closure, validate_cost)

__all__ = [
    "Coupling", "DualityReport", "PrimalResult", "DualResult", "OTResult", "TransshipmentResult",
    "solve_primal_mass", "solve_dual_mincut", "brute_force_dual", "solve_ot_two_var",
    "solve_transshipment_one_var", "certify_duality", "BRUTE_FORCE_LIMIT",
]

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class Coupling:
    """Joint law with prescribed marginals, stored sparsely.

    ``entries`` maps ``(i, j)`` to a positive mass; absent pairs carry zero.
    """

    ground: GroundSet
    entries: dict
    row_marginal: Measure
    col_marginal: Measure

    def __post_init__(self):
        require_same_ground(self.ground, self.row_marginal.ground, self.col_marginal.ground)
        n = len(self.ground)
        rows = [Fraction(0)] * n
        cols = [Fraction(0)] * n
        clean = {}
        for (i, j), m in sorted(self.entries.items()):
            m = Fraction(m)
            if m < 0:
                raise ValueError(f"negative coupling mass at {(i, j)}")
            if m:
                clean[(i, j)] = m
                rows[i] += m
                cols[j] += m
        if tuple(rows) != self.row_marginal.weights:
            raise ValueError("coupling rows do not sum to the first marginal")
        if tuple(cols) != self.col_marginal.weights:
            raise ValueError("coupling columns do not sum to the second marginal")
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, ij) -> Fraction:
        return self.entries.get(tuple(ij), Fraction(0))

    @property
    def matrix(self) -> np.ndarray:
        n = len(self.ground)
        out = np.full((n, n), Fraction(0), dtype=object)
        for (i, j), m in self.entries.items():
            out[i, j] = m
        return out

    def mass_on(self, r: Relation) -> Fraction:
        require_same_ground(self.ground, r.ground)
        inc = r.incidence
        return sum((m for (i, j), m in self.entries.items() if inc[i, j]), Fraction(0))

    def cost(self, c: CostMatrix) -> Fraction:
        require_same_ground(self.ground, c.ground)
        return sum((m * c.entries[i, j] for (i, j), m in self.entries.items()), Fraction(0))


@dataclass(frozen=True)
class PrimalResult:
    coupling: Coupling
    uncovered: Fraction


@dataclass(frozen=True)
class DualResult:
    set: IndexSet
    value: Fraction


@dataclass(frozen=True)
class OTResult:
    coupling: Coupling
    value: Fraction


@dataclass(frozen=True)
class TransshipmentResult:
    potential: Potential
    value: Fraction


@dataclass(frozen=True)
class DualityReport:
    primal_value: Fraction
    dual_value: Fraction
    optimal_coupling: Coupling
    optimal_set: IndexSet
    certificate_ok: bool
    oracle_value: Optional[Fraction] = None


def _common_denominator(*vectors) -> int:
    return math.lcm(*(v.denominator for vec in vectors for v in vec))


def _scaled(weights, den):
    return [int(w * den) for w in weights]


def _complete(n, flows, mu, nu):
    """Place leftover marginal mass greedily in index order (north-west corner)."""
    rows = list(mu.weights)
    cols = list(nu.weights)
    for (i, j), m in flows.items():
        rows[i] -= m
        cols[j] -= m
    entries = dict(flows)
    j = 0
    for i in range(n):
        while rows[i] > 0:
            while cols[j] == 0:
                j += 1
            m = min(rows[i], cols[j])
            entries[(i, j)] = entries.get((i, j), Fraction(0)) + m
            rows[i] -= m
            cols[j] -= m
    return entries


def _mass_network(mu, nu, r):
    n = len(mu)
    den = _common_denominator(mu.weights, nu.weights)
    supply = _scaled(mu.weights, den)
    demand = _scaled(nu.weights, den)
    net = _flow.FlowNetwork(2 * n + 2)
    s, t = 2 * n, 2 * n + 1
    for i in range(n):
        if supply[i]:
            net.add_edge(s, i, supply[i])
    for j in range(n):
        if demand[j]:
            net.add_edge(n + j, t, demand[j])
    # strictly above total mass, so a relation arc is never the saturated side of a cut
    unbounded = den + 1
    rows = np.flatnonzero(np.array(supply) > 0)
    cols = np.flatnonzero(np.array(demand) > 0)
    arcs = {}
    sub = r.incidence[np.ix_(rows, cols)]
    for a, b in zip(*np.nonzero(sub)):
        i, j = int(rows[a]), int(cols[b])
        arcs[(i, j)] = net.add_edge(i, n + j, unbounded)
    _flow.max_flow(net, s, t)
    return net, arcs, den


def _check_inputs(mu, nu, r):
    require_same_ground(mu.ground, nu.ground, r.ground)
    require_preorder(r)


def solve_primal_mass(mu: Measure, nu: Measure, r: Relation) -> PrimalResult:
    """Coupling of ``mu`` and ``nu`` maximising the mass it puts on ``r``.

    Returns the coupling together with the uncovered mass ``1 - pi(R)``.
    """
    _check_inputs(mu, nu, r)
    n = len(mu)
    net, arcs, den = _mass_network(mu, nu, r)
    flows = {}
    for ij, e in arcs.items():
        f = net.flow_on(e)
        if f:
            flows[ij] = Fraction(f, den)
    covered = sum(flows.values(), Fraction(0))
    coupling = Coupling(mu.ground, _complete(n, flows, mu, nu), mu, nu)
    return PrimalResult(coupling, 1 - covered)


def solve_dual_mincut(mu: Measure, nu: Measure, r: Relation) -> DualResult:
    """Optimal upper set read off the minimum cut.

    Supply points still reachable from the source in the residual network form
    a set ``B``; the cut has value ``mu(B^c) + nu(R(B))``, hence the closure
    ``R(B)`` attains ``mu - nu`` equal to the uncovered mass.
    """
    _check_inputs(mu, nu, r)
    n = len(mu)
    net, _, _ = _mass_network(mu, nu, r)
    seen = net.reachable(2 * n)
    source_side = IndexSet(mu.ground, np.array(seen[:n], dtype=bool))
    best = upper_closure(source_side, r)
    return DualResult(best, mu.mass(best) - nu.mass(best))


def brute_force_dual(mu: Measure, nu: Measure, r: Relation) -> DualResult:
    """Maximise ``mu(A) - nu(A)`` over every upper set by exhaustive enumeration.

    Independent of the flow code: subsets are bitmasks, filtered by the
    closure condition. Ties go to the smallest set, then the smallest mask.
    """
    _check_inputs(mu, nu, r)
    n = len(mu)
    if n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force is limited to {BRUTE_FORCE_LIMIT} points, got {n}")
    den = _common_denominator(mu.weights, nu.weights)
    gain = [int((a - b) * den) for a, b in zip(mu.weights, nu.weights)]
    masks = np.arange(1 << n, dtype=np.int64)
    upper = np.ones(masks.shape, dtype=bool)
    exact = sum(abs(g) for g in gain) < 2 ** 62
    value = np.zeros(masks.shape, dtype=np.int64 if exact else object)
    size = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        up = sum(1 << j for j in np.flatnonzero(r.incidence[i]))
        has_i = ((masks >> i) & 1).astype(bool)
        upper &= ~has_i | ((masks & up) == up)
        value = value + np.where(has_i, gain[i], 0).astype(value.dtype)
        size += has_i
    cand = np.flatnonzero(upper)
    vals = value[cand]
    top = max(vals.tolist())
    best = cand[np.asarray(vals == top, dtype=bool)]
    pick = int(best[np.argmin(size[best])])
    members = np.array([(pick >> i) & 1 for i in range(n)], dtype=bool)
    return DualResult(IndexSet(mu.ground, members), Fraction(int(top), den))


def solve_ot_two_var(mu: Measure, nu: Measure, c: CostMatrix) -> OTResult:
    """Exact minimum-cost coupling (transportation problem) for a rational cost."""
    require_same_ground(mu.ground, nu.ground, c.ground)
    n = len(mu)
    den = _common_denominator(mu.weights, nu.weights)
    cden = _common_denominator(c.entries.ravel())
    supply = _scaled(mu.weights, den)
    demand = _scaled(nu.weights, den)
    net = _flow.FlowNetwork(2 * n + 2)
    s, t = 2 * n, 2 * n + 1
    rows = [i for i in range(n) if supply[i]]
    cols = [j for j in range(n) if demand[j]]
    for i in rows:
        net.add_edge(s, i, supply[i])
    for j in cols:
        net.add_edge(n + j, t, demand[j])
    arcs = {}
    for i in rows:
        for j in cols:
            arcs[(i, j)] = net.add_edge(i, n + j, den, int(c.entries[i, j] * cden))
    flow, _ = _flow.min_cost_flow(net, s, t, den)
    assert flow == den, "transportation network must carry all mass"
    entries = {ij: Fraction(net.flow_on(e), den) for ij, e in arcs.items() if net.flow_on(e)}
    coupling = Coupling(mu.ground, entries, mu, nu)
    return OTResult(coupling, coupling.cost(c))


def solve_transshipment_one_var(mu: Measure, nu: Measure, c: CostMatrix) -> TransshipmentResult:
    """Maximise ``sum phi (mu - nu)`` subject to ``phi(x) - phi(y) <= c(x, y)``.

    Solved through its dual, a min-cost transshipment of ``mu - nu`` on a
    single copy of the ground set; the optimal potential is recovered from
    shortest distances in the final residual graph and normalised to minimum 0.

    Raises
    ------
    CostConditionsViolated
        If ``c`` lacks a zero diagonal or the triangle inequality. Without
        them the one-variable value need not match the coupling value.
    """
    ground = require_same_ground(mu.ground, nu.ground, c.ground)
    report = validate_cost(c)
    if not report.ok:
        raise CostConditionsViolated(report)
    n = len(ground)
    e = c.entries
    den = _common_denominator(mu.weights, nu.weights)
    cden = _common_denominator(e.ravel())
    balance = [int((a - b) * den) for a, b in zip(mu.weights, nu.weights)]
    net = _flow.FlowNetwork(n + 2)
    s, t = n, n + 1
    for i, b in enumerate(balance):
        if b > 0:
            net.add_edge(s, i, b)
        elif b < 0:
            net.add_edge(i, t, -b)
    total = sum(b for b in balance if b > 0)
    arcs = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                arcs[(i, j)] = net.add_edge(i, j, total, int(e[i, j] * cden))
    flow, cost = _flow.min_cost_flow(net, s, t, total)
    assert flow == total
    residual = [(i, j, e[i, j]) for i in range(n) for j in range(n) if i != j]
    residual += [(j, i, -e[i, j]) for (i, j), a in arcs.items() if net.flow_on(a)]
    dist = _flow.shortest_distances(n, residual)
    low = min(-d for d in dist) if dist else Fraction(0)
    phi = Potential(ground, tuple(Fraction(-d) - low for d in dist))
    value = dual_objective(phi, mu, nu)
    if value != Fraction(cost, den * cden) or not check_one_var_feasible(phi, c):
        raise CertificateFailure("recovered potential does not certify the transshipment optimum")
    return TransshipmentResult(phi, value)


def certify_duality(mu: Measure, nu: Measure, r: Relation, *, oracle: Optional[bool] = None,
                    raise_on_failure: bool = False) -> DualityReport:
    """Solve both sides of the zero-one problem and check they agree exactly.

    Parameters
    ----------
    oracle : bool, optional
        ``None`` cross-checks against :func:`brute_force_dual` when the ground
        set has at most 20 points; ``True`` forces the check (``TooLarge``
        beyond the limit); ``False`` skips it.
    raise_on_failure : bool
        Raise :class:`CertificateFailure` instead of returning a failed report.
    """
    primal = solve_primal_mass(mu, nu, r)
    dual = solve_dual_mincut(mu, nu, r)
    n = len(mu)
    run_oracle = n <= BRUTE_FORCE_LIMIT if oracle is None else oracle
    oracle_value = brute_force_dual(mu, nu, r).value if run_oracle else None
    coupling = primal.coupling
    ok = (primal.uncovered == dual.value
          and is_upper_set(dual.set, r)
          and coupling.row_marginal == mu and coupling.col_marginal == nu
          and 1 - coupling.mass_on(r) == primal.uncovered
          and (oracle_value is None or oracle_value == dual.value))
    report = DualityReport(primal.uncovered, dual.value, coupling, dual.set, ok, oracle_value)
    if raise_on_failure and not ok:
        raise CertificateFailure(f"primal {primal.uncovered} != dual {dual.value}")
    return report
