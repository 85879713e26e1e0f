# %% [markdown]
# # Causal graphs and the discrete conformal time separation
#
# Sprinkle points, join causal pairs, and take the longest path with edges
# weighted by max(Omega(u), Omega(v)) * tau(u, v).

# %%
import numpy as np

from synthcone import discretize as dz
from synthcone import factors as fc
from synthcone.spaces import catalog_space

strip = catalog_space("minkowski_strip")
g = dz.sprinkle(strip, ([0.1, -0.2], [0.9, 0.2]), 200, seed=7)
r = dz.sprinkle(strip, ([0.1, -0.2], [0.9, 0.2]), 200, seed=7, link_rule="reduction")
print("edges: all pairs", len(g.edges), "transitive reduction", len(r.edges))

# %% [markdown]
# The dynamic program agrees exactly with exhaustive enumeration of paths
# and partitions on small graphs.

# %%
mismatch = 0
for seed in range(20):
    graph, a, b = dz.random_dag(seed)
    mismatch += dz.dag_tau_omega(graph, a, b)[0] != dz.brute_force_tau_omega(graph, a, b)
print("mismatches on 20 random DAGs:", mismatch)

# %% [markdown]
# ## Edge length matters
#
# With every causal pair linked, the longest path jumps straight to the
# maximum of Omega: two edges through (0.5, 0) score 0.125.  Capping edge
# length at a few point spacings recovers 11/96.

# %%
omega = fc.t_poly([0.0, 1.0, -1.0])
p, q = np.array([0.25, 0.0]), np.array([0.75, 0.0])
for n in (100, 400, 1600):
    pts = np.vstack([p, dz.diamond_sprinkle(p, q, n, np.random.default_rng(0)), q])
    free = dz.graph_from_points(strip, pts, omega=omega)
    capped = dz.graph_from_points(strip, pts, omega=omega, max_edge=3 * np.sqrt(0.125 / n))
    print(n, "all pairs", round(dz.dag_tau_omega(free, 0, n + 1)[0], 6),
          "capped", round(dz.dag_tau_omega(capped, 0, n + 1)[0], 6), "target", round(11 / 96, 6))

# %% [markdown]
# ## Metric graphs

# %%
net = dz.epsilon_net(0.0, 1.0, 1e-3, include=[[0.25], [0.5]],
                     contains=lambda x: (x[..., 0] > 0) & (x[..., 0] < 1)).with_omega(fc.nomizu_interval())
value, path = dz.graph_d_omega(net, net.find([0.25]), net.find([0.5]))
print("net distance", value, "ln 2 =", np.log(2), "hops", len(path) - 1)
