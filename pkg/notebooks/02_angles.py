# %% [markdown]
# # Angles between timelike curves
#
# The angle at a common start point comes from comparison triangles whose
# third side is null.  Conformal changes rescale all three sides locally by
# almost the same amount, so the limiting angle does not move.

# %%
import numpy as np

from synthcone import conformal as cf
from synthcone import curves as cv
from synthcone import factors as fc
from synthcone.spaces import catalog_space

m2 = catalog_space("minkowski2")
p = np.array([0.3, 0.0])
alpha = cv.line(p, p + np.array([0.4, 0.0]), kind="timelike")
beta = cv.line(p, p + np.array([0.4, 0.24]), kind="timelike")  # velocity 0.6
schedule = np.geomspace(0.1, 1e-5, 6)

# %%
for label, omega in (("plain", None), ("t(1-t)+0.1", fc.t_poly([0.1, 1.0, -1.0]))):
    res = cf.angle_limit(m2, omega, alpha, beta, schedule)
    print(label)
    for s, t, a, b, c, ang in res.sequence:
        print(f"  s={s:.1e}  a={a:.3e}  b={b:.3e}  angle={ang:.7f}")
print("rapidity atanh(0.6) =", np.arctanh(0.6))

# %%
comp = cf.comparison_angle(2.0, 1.0, 0.0)
print(comp.comparison_angle, comp.sign, comp.convention)
