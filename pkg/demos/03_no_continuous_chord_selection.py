"""Why two sphere-valued terms with a fixed centre cannot work.

Two sphere-valued maps averaging to v would select, continuously, a chord
bisected by v. Near the origin that is impossible: the chords through
points p close to 0 make an angle bounded below with the line through p,
so walking once around the origin turns the chord by half a turn.
"""

# %%
import numpy as np

from spherespan import body as B
from spherespan import obstruct as O
from spherespan.section import chord_map

# The angle bound: exactly a right angle for the circle, smaller but
# positive for the l4 ball.
for name, K, U in (("disk", B.disk(), 0.1), ("l4", B.LpBall(4, 2), 0.05)):
    tb = O.theta_bound(K, U)
    print(f"{name}: theta = {tb.theta:.6f} over {tb.midpoint_samples} midpoints, "
          f"double-chord residual {tb.double_chord_residual:.1e}")

# %% Try the natural candidate, the chord map itself, on the disk.
K = B.disk()
rep = O.discontinuity_witness(K, lambda p: chord_map(K, p), 0.1)
print("chord map on the disk:", "jump", round(rep.jump, 3), "between", rep.p.round(4), "and", rep.p_prime.round(4))

# %% And twenty other heuristics on the l4 ball. All of them jump.
K = B.LpBall(4, 2)
for name, section in O.heuristic_sections(K):
    rep = O.discontinuity_witness(K, section, 0.05)
    print(f"  {name:24s} jump {rep.jump:.3f} in round {rep.round}")

# %% Evaluating at v = 0 pins down the weights: a convex combination of two
# unit vectors can only vanish with equal weights on an antipodal pair.
s = np.array([0.6, 0.8])
print(O.lambda_forcing_check(0.5, 0.5, s, -s, B.disk())["status"])
print(O.lambda_forcing_check(0.6, 0.4, s, -s, B.disk()))
