# %% [markdown]
# # Conformal changes of length spaces
#
# In the metric setting the conformal length is a supremum over partitions
# with segments weighted by the smallest Omega.  The factor 1/rho, with rho
# the largest radius of a compact closed ball, makes a locally compact
# length space complete.

# %%
import numpy as np

from synthcone import curves as cv
from synthcone import factors as fc
from synthcone import metric as mt

interval = mt.length_space("open_interval")
comp = mt.completion_factor(interval)
grid = np.array([[0.1], [0.3], [0.5]])
print("rho at 0.1, 0.3, 0.5:", np.ravel(comp.rho(grid)))

# The oracle-based factor bisects for every evaluation, so the heavier calls
# below use the equivalent closed form 1 / min(t, 1 - t).
omega = fc.nomizu_interval()
print("oracle factor", comp.omega(grid), "closed form", omega(grid))

# %%
res = mt.metric_conformal_length(interval, omega, cv.scalar_path(0.25, 0.5), tol=1e-6)
print("length over [0.25, 0.5]:", res.value, "ln 2 =", np.log(2))
for strategy in ("closed_form", "curve_family", "graph"):
    print(strategy, mt.d_omega(interval, omega, 0.05, 0.5, strategy).value, "ln 10 =", np.log(10))

# %% [markdown]
# The sequence 2^-n runs off the end of (0, 1).  Under d it is Cauchy; under
# d_Omega each step costs ln 2, so it no longer converges.

# %%
xs = [2.0 ** -n for n in range(1, 12)]
for f in (omega, fc.constant(1.0)):
    rep = mt.completeness_probe(interval, f, xs)
    print(f.label, rep.verdict, "tail diameter", round(rep.tail_diameter, 4))

# %% [markdown]
# ## Speed and local comparison

# %%
check = mt.conformal_speed_check(interval, omega, cv.scalar_path(0.1, 0.4), 0.25)
print("speed of d_Omega at 0.25:", check.v_omega.value, "Omega times speed:", check.omega_v)
print(mt.bilipschitz_probe(interval, omega, [0.5], 0.5, r0=0.1))
