"""What does work: paths, and four extreme points in the plane.

Over an interval, a ball-valued path is the average of two paths that never
vanish, and each of those splits into two chord endpoints. For planar
maps, a constant extreme point plus a chord gives a span of at most four
extreme points.
"""

# %%
import numpy as np

from spherespan import body as B
from spherespan import decompose as D
from spherespan.maps import interval_map

t = np.linspace(0, 1, 1001)
spiral = interval_map(0.9 * np.stack([t * np.cos(4 * np.pi * t), t * np.sin(4 * np.pi * t)], axis=1), t)
avg = D.two_nonvanishing_average(B.disk(), spiral)
print(f"two non-vanishing paths: min gauge {avg.shell_min_gauge:.3f}, w={np.round(avg.params['w'], 3)}")
cert = D.shell_convex_decomposition(B.disk(), spiral)
print(f"four sphere-valued terms with weights {cert.coefficients}: recon {cert.sup_reconstruction_error:.1e}")
print("adjacent-sample jumps:", np.round(cert.continuity_modulus, 4))

# %% Four extreme points for an arbitrary map into the l4 ball.
K = B.LpBall(4, 2)
grid = D.ball_grid(K, 1000)
f = grid.with_values(0.8 * np.sin(2 * grid.points[:, ::-1]))
cert = D.decompose_four_extreme(K, f)
print(cert.notes[0], "| coefficients", cert.coefficients.round(4))
print(f"recon {cert.sup_reconstruction_error:.1e}, sphere {cert.sphere_error:.1e}")

# %% Certificates can be exported for plotting.
import os
import tempfile

path = os.path.join(tempfile.mkdtemp(), "four.csv")
cert.write_csv(path)
with open(path) as fh:
    print(fh.readline().strip())
