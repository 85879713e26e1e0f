# %% [markdown]
# # The causal ladder and conformal changes
#
# Each catalog space gets a verdict per causality condition, with a
# replayable witness for every violation.  Conformal factors leave the
# relations alone, so the verdicts should not change.

# %%
from synthcone import causality as cz
from synthcone import discretize as dz
from synthcone import factors as fc
from synthcone.spaces import catalog_space

for name in ("minkowski_strip", "funnel_X", "imprison_W", "infinity_line"):
    space = catalog_space(name)
    rep = cz.ladder_probe(space, seed=0)
    print(name, {c: rep.status(c) for c in ("globally_hyperbolic", "non_totally_imprisoning")},
          "tau finite:", rep.flags["tau_finite"])
    for cond in cz.CONDITIONS:
        v = rep.verdicts[cond]
        if v.status == "violated" and v.witness is not None:
            print("   ", cond, v.witness["type"], "replays:", cz.replay_witness(space, v.witness))

# %%
for name in ("minkowski_strip", "funnel_X"):
    diff = cz.conformal_ladder_invariance(catalog_space(name), fc.exp_t(1.0, 0.5), seed=0)
    print(name, "diffs under exp(t/2):", diff.diffs)

# %% [markdown]
# ## Blowing up tau near an escaping sequence
#
# On a discretization of the funnel's bounding diamond, a factor built from
# bumps around the branch tips forces tau_Omega(p-, p_n) >= n.

# %%
graph = dz.funnel_hull_graph(400, 8, seed=3)
rep = cz.finiteness_probe(graph, threshold=8, seed=3)
for e in rep.entries:
    print(e["n"], round(e["tau_omega"], 2), ">=", e["bound"])
print("growth certified:", rep.growth_certified)
