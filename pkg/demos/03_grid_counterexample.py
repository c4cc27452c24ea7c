# # A grid version of the threshold order
#
# mu is uniform on {0, 1/n, ..., (n-1)/n} and nu on the same grid shifted by 1.
# x relates to y when x = y or y > x + 1. A unit shift never qualifies, so the
# best coupling shifts by 1 + 1/n instead and loses exactly one atom.

# %%
from zero_one_ot import (build_grid_instance, mean_gap_certificate, resolution_sweep,
                         shift_coupling, solve_dual_mincut)

g = build_grid_instance(4)
print("labels:", [str(x) for x in g.ground.labels])

# %%
for k in range(1, 5):
    print(f"shift by {k}/4: mass on R = {shift_coupling(g, k).mass_on_R}")

# %% [markdown]
# The dual certificate at n = 4 is the single point 3/4: it carries mu-mass
# 1/4 and nothing in nu's support lies above it.

# %%
dual = solve_dual_mincut(g.mu, g.nu, g.relation)
print(dual.set.ids, dual.value)

# %% [markdown]
# The means differ by exactly 1, while every related pair moves by at least
# 1 + 1/n. That alone forces at least 1/(n+1) uncovered mass.

# %%
print(mean_gap_certificate(g))

# %%
report = resolution_sweep([1, 2, 4, 8, 16, 32, 64])
for row in report.rows:
    print(row.resolution, row.primal_value, row.certificate_bound, row.shift_mass)
