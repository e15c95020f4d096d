"""Pure numpy implementations of the per-iteration kernels.

Mirrors ``_ckernels.pyx`` function for function; used when the compiled
extension is unavailable or ``FAMDIMPUTE_PURE`` is set.
"""
import numpy as np


def column_moments(x):
    mean = x.mean(axis=0)
    var = ((x - mean) ** 2).mean(axis=0)
    return mean, var


def center(x, sqrt_d, m):
    return x / sqrt_d - m


def reconstruct_blend(us, vt, m, sqrt_d, x, w, xhat_prev):
    xhat = (us @ vt + m) * sqrt_d
    xnew = w * x + (1.0 - w) * xhat
    if xhat_prev is None:
        change = float("nan")
    else:
        change = float(((xhat_prev - xhat) ** 2).sum())
    return xhat, xnew, change
