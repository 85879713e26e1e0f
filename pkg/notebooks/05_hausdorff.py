# %% [markdown]
# # Hausdorff measure from diamond covers
#
# Cover a region by small causal diamonds and sum omega_s * tau^s.  In two
# dimensions with s = 2 this recovers the area.

# %%
from synthcone import factors as fc
from synthcone import hausdorff as hd
from synthcone.spaces import catalog_space

m2 = catalog_space("minkowski2")
unit = hd.Region.diamond([0.0, 0.0], [1.0, 0.0])
schedule = [0.2, 0.1, 0.05]
print("omega_s:", [round(hd.omega_s(s), 7) for s in (1, 2, 4)])

# %%
for s in (2, 3):
    est = hd.hausdorff_measure(m2, unit, s, schedule)
    print(f"s={s}", [round(v, 5) for v in est.premeasures], "->", round(est.value, 5))

# %% [markdown]
# Changing tau by Omega changes the measure by the integral of Omega^s.

# %%
mc = hd.conformal_measure_check(m2, fc.t_poly([0.5, 1.0, -1.0]), unit, 2, schedule)
print("lhs", mc.lhs, "rhs", mc.rhs, "gap", mc.gap)
