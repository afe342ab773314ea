import numpy as np


def illinois(fun, a, b, fa, fb, xtol=4e-16, ftol=1e-16, maxiter=200):
    """Vectorised Illinois (modified regula falsi) on sign-changing brackets.

    ``fun`` maps an array of abscissae to an array of values.  Each bracket
    ``[a, b]`` must satisfy ``fa * fb <= 0``; brackets are kept throughout,
    so convergence is guaranteed.  Returns the endpoint with the smaller
    residual.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    fa = np.array(fa, dtype=float)
    fb = np.array(fb, dtype=float)
    stalls = np.zeros(a.shape, dtype=int)
    for _ in range(maxiter):
        done = (np.abs(fb) <= ftol) | (np.abs(fa) <= ftol) | (np.abs(b - a) <= xtol * np.maximum(1.0, np.abs(b)))
        if np.all(done):
            break
        denom = fb - fa
        with np.errstate(divide="ignore", invalid="ignore"):
            c = b - fb * (b - a) / denom
        mid = 0.5 * (a + b)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        bad = ~np.isfinite(c) | (c <= lo) | (c >= hi) | (stalls >= 3)
        c = np.where(bad, mid, c)
        c = np.where(done, b, c)
        fc = fun(c)
        flip = np.sign(fc) != np.sign(fb)
        # flip: root in [b, c]; old b becomes the other end
        new_a = np.where(flip, b, a)
        new_fa = np.where(flip, fb, np.where(bad, fa, fa / 2))
        stalls = np.where(flip | bad, 0, stalls + 1)
        a = np.where(done, a, new_a)
        fa = np.where(done, fa, new_fa)
        b = np.where(done, b, c)
        fb = np.where(done, fb, fc)
    return np.where(np.abs(fa) < np.abs(fb), a, b)
