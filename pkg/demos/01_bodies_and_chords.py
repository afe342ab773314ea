"""Norms as convex bodies, and the chords a point bisects.

Run with ``python3 demos/01_bodies_and_chords.py``.
"""

# %% A norm is described by its unit ball. The package only ever asks a body
# three questions: the gauge of a vector, its support function, and where a
# ray leaves it.
import numpy as np

from spherespan import body as B
from spherespan import section as S

bodies = {"disk": B.disk(), "square": B.square(), "l4": B.LpBall(4, 2), "hexagon": B.hexagon()}
v = np.array([0.5, 0.25])
for name, K in bodies.items():
    print(f"{name:8s} gauge{tuple(v.tolist())} = {B.gauge(K, v):.6f}")

# %% Exposed points are boundary points where a linear functional has a
# unique minimum. A square's edge is not exposed, its vertices are.
q, m = B.exposed_point(B.square(), [1, 2])
print("square, phi=(1,2):", q, m)
try:
    B.exposed_point(B.square(), [1, 0])
except Exception as exc:
    print("square, phi=(1,0):", type(exc).__name__)

# %% Every interior point other than the centre bisects at least one chord.
# For the circle it is the chord perpendicular to the radius.
(c,) = S.bisected_chords_2d(B.disk(), [0.5, 0.0])
print("disk chord through (0.5, 0):", c.p1.round(6), c.p2.round(6))

# In a strictly convex body the chord is unique, so there is a chord map.
K = bodies["l4"]
for p in ([0.3, 0.1], [-0.2, 0.4]):
    c = S.chord_map(K, p)
    print(f"l4 chord map at {p}: {c.p1.round(4)} -> {c.p2.round(4)}")

# Flat faces produce a whole continuum of bisected chords.
try:
    S.bisected_chords_2d(B.square(), [0.5, 0.0])
except Exception as exc:
    print("square at (0.5, 0):", type(exc).__name__, f"({len(exc.chords)} chords kept)")

# %% Inscribed polygons approach the disk at rate 1 - cos(pi/m).
for m in (4, 6, 12, 64):
    d = B.hausdorff_distance(B.polytope_approx(B.disk(), m), B.disk())
    print(f"m={m:3d}  d_H={d:.3e}  1-cos(pi/m)={1 - np.cos(np.pi / m):.3e}")
