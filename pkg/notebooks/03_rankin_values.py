# %% [markdown]
# # Rankin-Selberg values along the branch
#
# For f ordinary of weight k and g of weight l the p-adic L-value at twist t
# is lambda_{f, alpha} applied to the ordinary part of
# theta^t(g^[p]) E^[p]_{k-l-2t}.  Here f is on the Delta branch and g = Delta.

# %%
from padic_rankin.family import find_branch_member
from padic_rankin.modforms import cusp_eigenforms
from padic_rankin.ordinary import katz_system
from padic_rankin.panchishkin import critical_twist_range, is_panchishkin, rankin_profile
from padic_rankin.rankin import (RankinPoint, dirichlet_coefficients, interpolation_factors,
                                 rankin_lvalue, sigma_range)

p, N = 11, 2
g = cusp_eigenforms(12, p, N)[0]
f = find_branch_member(p, N, 32, g.residual_system())
sys_ = katz_system(p, N, 32)

# %% [markdown]
# The interpolation range comes out of the Hodge-Tate bookkeeping too.

# %%
print(sigma_range(32, 12))
print([t for t in range(-3, 25) if is_panchishkin(rankin_profile(32, 12, t))])
print("twist range around t = 0:", critical_twist_range(rankin_profile(32, 12, 0)))

# %%
values = [rankin_lvalue(RankinPoint(f, g, t), sys_) for t in sigma_range(32, 12)]
for v in values:
    print(v.provenance["t"], v.value, "U_p power", v.up_power)

# %% [markdown]
# Twists ten apart agree mod 11.

# %%
print([(values[t].value.residue(N) - values[t + 10].value.residue(N)) % p for t in range(10)])

# %% [markdown]
# The p-adic factors of the interpolation formula, archimedean pieces left
# symbolic, and the prime-to-p Dirichlet series.

# %%
print(interpolation_factors(RankinPoint(f, g, 3)).to_json())
print(dirichlet_coefficients(f, g, 12)[1:])
