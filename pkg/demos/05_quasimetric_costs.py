# # General costs: one potential or two
#
# With a zero diagonal and the triangle inequality, the two-potential
# transport value equals the single-potential transshipment value. With
# c(x, x) = 1 the equality breaks and the one-potential form is rejected.

# %%
from fractions import Fraction as F

from zero_one_ot import (CostConditionsViolated, CostMatrix, GroundSet, Measure,
                         check_one_var_feasible, solve_ot_two_var, solve_transshipment_one_var,
                         validate_cost)

g = GroundSet(("p", "q", "r", "s"))
cost = CostMatrix(g, [[0, F(1, 3), 1, F(2, 3)],
                      [1, 0, 1, F(1, 3)],
                      [F(1, 2), F(5, 6), 0, 1],
                      [1, 1, 1, 0]])
print(validate_cost(cost))

mu = Measure(g, (F(1, 2), F(1, 4), F(1, 4), 0))
nu = Measure(g, (0, F(1, 6), 0, F(5, 6)))

# %%
two = solve_ot_two_var(mu, nu, cost)
one = solve_transshipment_one_var(mu, nu, cost)
print("two potentials:", two.value, " one potential:", one.value)
print("potential:", [str(v) for v in one.potential.values], "feasible:", check_one_var_feasible(one.potential, cost))

# %%
x = GroundSet(("x",))
point = Measure(x, (1,))
bad = CostMatrix(x, [[1]])
print("two-potential value with c(x, x) = 1:", solve_ot_two_var(point, point, bad).value)
try:
    solve_transshipment_one_var(point, point, bad)
except CostConditionsViolated as exc:
    print("rejected:", exc)
