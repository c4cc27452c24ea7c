from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from zero_one_ot import (CostConditionsViolated, CostMatrix, Coupling, GroundMismatch, GroundSet,
                         Measure, Relation, RelationNotPreorder, TooLarge,
                         brute_force_dual, build_grid_instance, certify_duality,
                         check_one_var_feasible, is_upper_set, relation_to_cost,
                         solve_dual_mincut, solve_ot_two_var, solve_primal_mass,
                         solve_transshipment_one_var, transitive_reflexive_closure)

F = Fraction
ABC = GroundSet(("a", "b", "c"))
CHAIN = Relation.chain(ABC)
MU = Measure(ABC, (F(1, 2), F(1, 2), 0))
NU = Measure(ABC, (0, F(1, 2), F(1, 2)))
MU2 = Measure(ABC, (0, F(1, 2), F(1, 2)))
NU2 = Measure(ABC, (F(1, 2), F(1, 2), 0))


def test_coupling_marginals_are_enforced():
    with pytest.raises(ValueError):
        Coupling(ABC, {(0, 0): F(1, 2)}, MU, NU)


def test_primal_identity_coupling_when_measures_match():
    res = solve_primal_mass(MU, MU, CHAIN)
    assert res.uncovered == 0


def test_primal_chain_dominated():
    res = solve_primal_mass(MU, NU, CHAIN)
    assert res.uncovered == 0
    assert res.coupling.mass_on(CHAIN) == 1
    # the dual side confirms 0 is optimal
    assert oracles.best_upper_set_value(MU.weights, NU.weights, CHAIN.incidence) == 0


def test_primal_chain_reversed():
    res = solve_primal_mass(MU2, NU2, CHAIN)
    assert res.uncovered == F(1, 2)
    assert oracles.best_upper_set_value(MU2.weights, NU2.weights, CHAIN.incidence) == F(1, 2)
    assert res.coupling.row_marginal == MU2 and res.coupling.col_marginal == NU2


def test_dual_examples():
    assert solve_dual_mincut(MU, MU, CHAIN).value == 0
    res = solve_dual_mincut(MU2, NU2, CHAIN)
    assert res.value == F(1, 2)
    assert res.set.ids in (["c"], ["b", "c"])
    g = build_grid_instance(4)
    res = solve_dual_mincut(g.mu, g.nu, g.relation)
    assert res.value == F(1, 4) and res.set.ids == ["3/4"]


def test_grid4_dual_set_matches_enumeration():
    g = build_grid_instance(4)
    sets = oracles.upper_sets(g.relation.incidence)
    best = max(sum((g.mu[i] - g.nu[i] for i in s), F(0)) for s in sets)
    winners = [s for s in sets if sum((g.mu[i] - g.nu[i] for i in s), F(0)) == best]
    assert best == F(1, 4)
    assert frozenset([3]) in winners


def test_solvers_require_preorder_and_shared_ground():
    bad = Relation.from_pairs(ABC, [("a", "b"), ("b", "c")], include_diagonal=True)
    for solver in (solve_primal_mass, solve_dual_mincut, brute_force_dual):
        with pytest.raises(RelationNotPreorder):
            solver(MU, NU, bad)
    other = Measure(GroundSet(("x", "y", "z")), (1, 0, 0))
    with pytest.raises(GroundMismatch):
        solve_primal_mass(other, NU, CHAIN)


def test_brute_force_examples():
    assert len(oracles.upper_sets(CHAIN.incidence)) == 4
    assert brute_force_dual(MU, MU, CHAIN).value == 0
    res = brute_force_dual(MU2, NU2, CHAIN)
    assert res.value == F(1, 2) and res.set.ids == ["c"]


def test_brute_force_limit():
    g = GroundSet.range(21)
    m = Measure.uniform_on(g, range(21))
    with pytest.raises(TooLarge):
        brute_force_dual(m, m, Relation.identity(g))


def test_brute_force_at_limit_runs():
    g = GroundSet.range(20)
    rel = Relation.chain(g)
    mu = Measure.uniform_on(g, range(10, 20))
    nu = Measure.uniform_on(g, range(10))
    assert brute_force_dual(mu, nu, rel).value == 1


@given(st.integers(0, 100_000), st.integers(1, 8), st.booleans())
def test_strong_duality_random(seed, n, dag):
    g, mu, nu, rel = oracles.instance(oracles.rng(seed), n, dag=dag)
    primal = solve_primal_mass(mu, nu, rel)
    dual = solve_dual_mincut(mu, nu, rel)
    assert primal.uncovered == dual.value
    assert dual.value == oracles.best_upper_set_value(mu.weights, nu.weights, rel.incidence)
    assert brute_force_dual(mu, nu, rel).value == dual.value
    assert is_upper_set(dual.set, rel)
    assert 1 - primal.coupling.mass_on(rel) == primal.uncovered


@given(st.integers(0, 100_000), st.integers(2, 7))
def test_primal_matches_float_lp(seed, n):
    g, mu, nu, rel = oracles.instance(oracles.rng(seed), n)
    cost = [[0 if rel.incidence[i, j] else 1 for j in range(n)] for i in range(n)]
    lp = oracles.transport_lp(mu.weights, nu.weights, cost)
    assert abs(float(solve_primal_mass(mu, nu, rel).uncovered) - lp) < 1e-9


@given(st.integers(0, 100_000), st.integers(1, 7))
def test_enlarging_relation_never_hurts(seed, n):
    rng = oracles.rng(seed)
    g, mu, nu, rel = oracles.instance(rng, n)
    extra = np.array([[rng.random() < 0.2 for _ in range(n)] for _ in range(n)])
    bigger = transitive_reflexive_closure(Relation(g, rel.incidence | extra))
    assert solve_primal_mass(mu, nu, bigger).uncovered <= solve_primal_mass(mu, nu, rel).uncovered


def test_ot_two_var_examples():
    zero = CostMatrix(ABC, np.zeros((3, 3), dtype=int))
    assert solve_ot_two_var(MU2, NU2, zero).value == 0
    cost = relation_to_cost(CHAIN)
    assert solve_ot_two_var(MU2, NU2, cost).value == solve_primal_mass(MU2, NU2, CHAIN).uncovered
    assert solve_ot_two_var(MU, NU, cost).value == solve_primal_mass(MU, NU, CHAIN).uncovered
    two = GroundSet(("x1", "x2"))
    res = solve_ot_two_var(Measure(two, (1, 0)), Measure(two, (0, 1)),
                           CostMatrix(two, [[0, F(3, 7)], [0, 0]]))
    assert res.value == F(3, 7)


@given(st.integers(0, 100_000), st.integers(1, 6))
def test_ot_two_var_matches_float_lp(seed, n):
    rng = oracles.rng(seed)
    g = GroundSet.range(n)
    rows = [[F(rng.randint(0, 12), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)]
    mu = Measure(g, oracles.random_measure(rng, n))
    nu = Measure(g, oracles.random_measure(rng, n))
    res = solve_ot_two_var(mu, nu, CostMatrix(g, rows))
    assert abs(float(res.value) - oracles.transport_lp(mu.weights, nu.weights, rows)) < 1e-9
    assert res.value == res.coupling.cost(CostMatrix(g, rows))


def test_transshipment_examples():
    cost = relation_to_cost(CHAIN)
    res = solve_transshipment_one_var(MU, MU, cost)
    assert res.value == 0 and len(set(res.potential.values)) == 1
    res = solve_transshipment_one_var(MU2, NU2, cost)
    assert res.value == F(1, 2)
    assert res.potential.values == (0, 0, 1)
    assert res.value == brute_force_dual(MU2, NU2, CHAIN).value
    assert res.value == solve_ot_two_var(MU2, NU2, cost).value


def test_transshipment_rejects_bad_costs():
    one = GroundSet(("x",))
    m = Measure(one, (1,))
    with pytest.raises(CostConditionsViolated):
        solve_transshipment_one_var(m, m, CostMatrix(one, [[1]]))
    with pytest.raises(CostConditionsViolated):
        solve_transshipment_one_var(MU, NU, CostMatrix(ABC, [[0, 1, 5], [1, 0, 1], [1, 1, 0]]))


def test_hypothesis_violation_gap_is_real():
    # with c(x, x) = 1 the two-potential supremum is 1 (phi = 1, psi = 0) but any single
    # potential gives phi - phi = 0, so the one-variable value is 0
    one = GroundSet(("x",))
    m = Measure(one, (1,))
    assert solve_ot_two_var(m, m, CostMatrix(one, [[1]])).value == 1


@given(st.integers(0, 100_000), st.integers(1, 7))
def test_two_var_equals_one_var_on_quasimetrics(seed, n):
    rng = oracles.rng(seed)
    g = GroundSet.range(n)
    cost = CostMatrix(g, oracles.random_quasimetric(rng, n))
    mu = Measure(g, oracles.random_measure(rng, n))
    nu = Measure(g, oracles.random_measure(rng, n))
    one = solve_transshipment_one_var(mu, nu, cost)
    two = solve_ot_two_var(mu, nu, cost)
    assert one.value == two.value
    assert check_one_var_feasible(one.potential, cost)
    assert abs(float(one.value) - oracles.one_var_lp(mu.weights, nu.weights, cost.entries)) < 1e-9


def test_certify_examples():
    rep = certify_duality(MU2, NU2, CHAIN)
    assert rep.certificate_ok
    assert rep.primal_value == rep.dual_value == rep.oracle_value == F(1, 2)
    rep = certify_duality(MU, MU, CHAIN)
    assert rep.primal_value == rep.dual_value == 0 and rep.certificate_ok
    g = GroundSet.range(21)
    m = Measure.uniform_on(g, range(21))
    assert certify_duality(m, m, Relation.identity(g)).oracle_value is None
    with pytest.raises(TooLarge):
        certify_duality(m, m, Relation.identity(g), oracle=True)


def test_zero_mass_points_are_handled():
    g = GroundSet.range(5)
    rel = Relation.chain(g)
    mu = Measure(g, (0, 0, 1, 0, 0))
    nu = Measure(g, (1, 0, 0, 0, 0))
    rep = certify_duality(mu, nu, rel)
    assert rep.certificate_ok and rep.primal_value == 1
    assert rep.optimal_coupling[(2, 0)] == 1


def test_unit_atom_on_relation_arc():
    # all mass on a single related pair: the relation arc carries the full flow
    g = GroundSet.range(2)
    rel = Relation.chain(g)
    rep = certify_duality(Measure(g, (1, 0)), Measure(g, (0, 1)), rel)
    assert rep.certificate_ok and rep.primal_value == 0 and rep.optimal_set.ids == []
