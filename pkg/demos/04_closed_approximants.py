# # Closed approximants of an open relation
#
# The strict relation y > x + 1 is a union of the closed relations
# y >= x + 1 + 1/m. On a finite grid the family is nested and reaches the
# strict relation at m = n, and the optimal value decreases along it.

# %%
from zero_one_ot import (RelationFamily, approximant_sweep, build_grid_instance, check_family,
                         closed_approximant)

g = build_grid_instance(8)
members = tuple(closed_approximant(g, m) for m in (1, 2, 4, 8))
rep = check_family(RelationFamily(g.ground, members))
print("nested:", rep.nested, " union is the strict relation:", rep.union == g.relation)

# %%
rows, _ = approximant_sweep(g, [1, 2, 3, 4, 6, 8, 16])
for r in rows:
    print(f"m={r.parameter:>2}  pairs={r.pairs:>3}  uncovered={r.primal_value}")
