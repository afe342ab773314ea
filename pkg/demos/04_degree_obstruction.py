"""Convex combinations of sphere-valued maps and the degree of a boundary map.

If the identity is a convex combination of continuous sphere-valued maps,
each map must fix the extreme points of the body. On the boundary that
gives degree one, but shrinking the domain to the centre gives a constant
loop, of degree zero. The refuter below locates that clash on sampled
candidates.
"""

# %%
import numpy as np

from spherespan import body as B
from spherespan import degree as G
from spherespan import obstruct as O

rng = np.random.default_rng(0)
P = G.random_polygon(rng)
f = G.vertex_fixing_map(P, rng, excursion_wraps=2, wrap_edge=1)
print(f"polygon with {len(P.vertices)} vertices, map fixes them all:", G.fix_extreme_degree_check(P, f))

# %% Fixing the vertices is not quite enough in the plane: one edge can run
# the long way round. The edge images also have to stay in their homotopy
# class, which is automatic when the map comes from a face-preserving
# decomposition.
print("long way round:", G.fix_extreme_degree_check(P, G.long_way_map(P))["degree"])

# %% In three dimensions the degree is a signed count of pierced triangles.
V, F = G.icosphere(2)
from spherespan.maps import SphereMapSamples

print("identity", G.pl_degree(SphereMapSamples(V, V, F)), "antipodal", G.pl_degree(SphereMapSamples(V, -V, F)))

# %% Adversarial candidates reproduce the identity exactly on every ring,
# with sphere-valued pieces, yet each one is refuted.
for K, comps, lam, info in O.adversarial_candidates(count=3, seed=1):
    res = O.convex_decomposition_refuter(K, comps, lam)
    print(info["body"], "->", res.to_json()["statement"][:90], "...")

# %% Candidates that are only right on the boundary are rejected, not certified.
K, comps, lam, info = O.partial_candidates(count=1)[0]
print(O.convex_decomposition_refuter(K, comps, lam))
