# %% [markdown]
# # Katz expansions, U_p and the ordinary projector
#
# Weight-k overconvergent forms mod p^N are spanned by Miller elements of
# weight k + i(p - 1) divided by E_{p-1}^i.  U_p acts by a matrix A whose
# factorial powers converge to the ordinary projector E.

# %%
import numpy as np

from padic_rankin.linalg import rank_mod_p
from padic_rankin.modforms import cusp_eigenforms
from padic_rankin.ordinary import katz_system, lambda_f_alpha, stabilized_coordinates

p, N, k = 11, 2, 22
sys_ = katz_system(p, N, k)
print(sys_.provenance(), "basis size", sys_.size)
print("layers:", [i for i, _ in sys_.index])

# %% [markdown]
# Mod p, U_p kills every layer past the first: those rows vanish.

# %%
A = np.array(sys_.A.rows(), dtype=object) % p
print(A[:6, :6])

# %% [markdown]
# The ordinary part is two dimensional: the Eisenstein line and Delta's
# branch.

# %%
E = sys_.E
print("rank of E mod p:", rank_mod_p(E, p), " E^2 == E:", E @ E == E)

# %% [markdown]
# lambda_{f, alpha} reads off the f-component; on f_alpha itself it is 1.

# %%
f = cusp_eigenforms(k, p, N)[0]
x = stabilized_coordinates(sys_, f)
print("lambda(f_alpha) =", lambda_f_alpha(sys_, f, x))
print("lambda(U_p f_alpha) =", lambda_f_alpha(sys_, f, sys_.A @ x), " alpha =", f.alpha)
