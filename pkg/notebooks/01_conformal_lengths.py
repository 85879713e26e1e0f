# %% [markdown]
# # Conformal lengths of causal curves
#
# A conformal factor Omega reweights the time separation along a curve.
# The length is the infimum, over partitions, of the sum of tau over each
# segment weighted by the largest Omega on that segment.

# %%
import numpy as np

from synthcone import conformal as cf
from synthcone import curves as cv
from synthcone import factors as fc
from synthcone.spaces import ConformalSpace, catalog_space

strip = catalog_space("minkowski_strip")
omega = fc.t_poly([0.0, 1.0, -1.0])  # t (1 - t)
gamma = cv.vertical(0.25, 0.75)

# %% [markdown]
# Refining a partition can only lower the max-weighted sum.

# %%
for pts in ([0.25, 0.5, 0.75], [0.25, 0.375, 0.5, 0.625, 0.75]):
    print(len(pts) - 1, "segments:", cf.conformal_variation(strip, omega, gamma, pts))

res = cf.conformal_length(strip, omega, gamma, tol=1e-7)
print("length", res.value, "vs 11/96 =", 11 / 96, "converged:", res.converged)
print("sandwich", res.sandwich, "ok:", res.sandwich_ok)

# %% [markdown]
# ## The product-weighted alternative
#
# Weighting each segment by Omega at both ends instead gives a functional that
# is not additive, and its sup over curves breaks the reverse triangle
# inequality.

# %%
for eps in (0.1, 0.2, 0.25, 0.3):
    value = cf.prior_conformal_length(strip, omega, cv.vertical(eps, 1 - eps))
    print(f"eps={eps}: {value:.9f}  closed form {eps**2 * (1 - eps)**2 * (1 - 2 * eps):.9f}")

whole = cf.prior_conformal_length(strip, omega, cv.vertical(0.1, 0.9))
parts = (cf.prior_conformal_length(strip, omega, cv.vertical(0.1, 0.5))
         + cf.prior_conformal_length(strip, omega, cv.vertical(0.5, 0.9)))
print("whole", whole, "parts", parts)

outer = cf.prior_tau_omega(strip, omega, [0.01, 0.0], [0.99, 0.0])
inner = cf.prior_tau_omega(strip, omega, [0.25, 0.0], [0.75, 0.0])
print("outer pair at most", outer.upper, "inner pair at least", inner.lower)

# %% [markdown]
# ## Conformal time separation, composition and inversion

# %%
print("tau_Omega((0.25,0),(0.75,0)) =", cf.tau_omega(strip, omega, [0.25, 0.0], [0.75, 0.0]).value)
law = cf.conformal_length_composed(strip, omega, fc.t_poly([0.0, 1.0]), gamma)
print("composed lengths", law.lhs, law.rhs, "gap", law.gap)

lifted = ConformalSpace(strip, omega)
back = cf.tau_omega(lifted, omega.reciprocal(), [0.2, 0.0], [0.6, 0.1], strategy="curve_family", tol=1e-5)
print("(tau_Omega)_(1/Omega) =", back.value, "tau =", strip.tau([0.2, 0.0], [0.6, 0.1]))

# %% [markdown]
# Close to a point the ratio tau_Omega / tau approaches Omega there.

# %%
p = np.array([0.5, 0.0])
ratio = cf.local_ratio(strip, omega, p, lambda n: p + np.array([1.0 / n, 0.0]), 5, ns=[4, 16, 64, 256, 1024])
for n, r in zip(ratio.ns, ratio.ratios):
    print(n, r)
print("Omega(p) =", ratio.target)
