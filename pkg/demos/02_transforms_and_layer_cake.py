# # c-transforms and the layer-cake argument
#
# For c = 1 - 1_R the c-transform of psi is x -> min_y c(x, y) - psi(y).
# Transforming twice returns the negative of the first result, and any
# feasible potential with values in [0, 1] can be traded for one of its
# superlevel sets without lowering the objective.

# %%
from fractions import Fraction

from zero_one_ot import (GroundSet, IndexSet, Measure, Potential, Relation, c_transform,
                         dual_objective, layer_cake_extract, relation_to_cost, rescale_to_unit)

ground = GroundSet(("a", "b", "c"))
chain = Relation.chain(ground)
cost = relation_to_cost(chain)


def show(values):
    return " ".join(str(v) for v in values)


for row in cost.entries:
    print(show(row))

# %%
psi = Potential.indicator(IndexSet.of(ground, ["b"]))
once = c_transform(psi, cost, "first")
twice = c_transform(once, cost, "second")
print("psi      ", show(psi.values))
print("psi^c    ", show(once.values))   # -1 on the down-closure of {b}
print("(psi^c)^c", show(twice.values))

# %% [markdown]
# A feasible potential can be shifted into [0, 1]; the objective only depends
# on differences, so nothing is lost.

# %%
mu = Measure(ground, (0, Fraction(1, 2), Fraction(1, 2)))
nu = Measure(ground, (Fraction(1, 2), Fraction(1, 2), 0))
phi = rescale_to_unit(Potential(ground, (5, Fraction(11, 2), 6)), cost)
print("rescaled:", show(phi.values), "objective", dual_objective(phi, mu, nu))

# %%
res = layer_cake_extract(phi, mu, nu, chain)
print("superlevel set", res.set.ids, "at t =", res.threshold, "value", res.value)
