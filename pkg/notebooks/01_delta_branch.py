# %% [markdown]
# # The Delta branch at p = 11
#
# Level-one cusp forms are ordinary at 11 only in a few weights.  We scan,
# find them, and check that they sit on one Hida branch.

# %%
from padic_rankin.family import assemble_branch, branch_congruence_check
from padic_rankin.modforms import cusp_eigenforms, p_stabilize

p, N = 11, 3

# %%
for k in range(12, 41, 2):
    forms = cusp_eigenforms(k, p, N)
    ordinary = [f for f in forms if f.ordinary]
    if ordinary:
        f = ordinary[0]
        print(k, "a_2 =", f.a(2), "alpha =", f.alpha, "residual", f.residual_system())

# %% [markdown]
# Weights 12, 22 and 32 share Delta's residual system: one branch, seen at
# three classical points.  Weights congruent mod 10 agree mod 11.

# %%
delta = cusp_eigenforms(12, p, N)[0]
branch = assemble_branch(p, N, (12, 22, 32), delta)
for row in branch_congruence_check(branch, 1):
    print(row.k1, row.k2, row.valuations)

# %% [markdown]
# Weight 132 is congruent to 22 mod 110, so the branch predicts agreement
# mod 121 there.

# %%
f22 = cusp_eigenforms(22, p, N)[0]
for row in branch_congruence_check(assemble_branch(p, N, (22, 132), f22), 2):
    print(row.k1, row.k2, row.valuations)

# %% [markdown]
# The p-stabilisation of Delta is a U_p eigenform with eigenvalue alpha.

# %%
fa = p_stabilize(delta, 400)
print(fa.ints()[:12])
print("a_11(f_alpha) =", fa[11], " alpha =", delta.alpha.residue(N))
