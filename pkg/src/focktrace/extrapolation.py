"""Convergence acceleration and asymptotic-fit helpers shared by the
boundary-pairing limits and the Dixmier estimators."""

from __future__ import annotations

import numpy as np


def richardson_limit(xs, values):
    """Neville polynomial extrapolation of values(x) to x = 0.

    xs must be distinct positive scales (typically r^-2 for radii r);
    values may be complex.  With a single point the value itself is
    returned.
    """
    xs = [float(x) for x in xs]
    vals = [complex(v) for v in values]
    if len(xs) != len(vals) or not xs:
        raise ValueError("xs and values must be equal-length and nonempty")
    tab = list(vals)
    m = len(tab)
    for level in range(1, m):
        new = []
        for i in range(m - level):
            x0, x1 = xs[i], xs[i + level]
            new.append((x0 * tab[i + 1] - x1 * tab[i]) / (x0 - x1))
        tab = new
    return tab[0]


def fit_inverse_log(Ks, values):
    """Least-squares fit values[i] = c + b / log(Ks[i] + 2).

    Returns (c, b, rms_residual).
    """
    Ks = np.asarray(Ks, dtype=float)
    y = np.asarray(values, dtype=float)
    if Ks.size < 2:
        raise ValueError("need at least two grid points")
    x = 1.0 / np.log(Ks + 2.0)
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return float(coef[0]), float(coef[1]), rms


def loglog_slope(xs, ys):
    """Least-squares slope of log|y| against log x."""
    xs = np.asarray(xs, dtype=float)
    ys = np.abs(np.asarray(ys, dtype=float))
    if np.any(ys == 0):
        raise ValueError("zero values have no log-log slope")
    lx = np.log(xs)
    ly = np.log(ys)
    A = np.vstack([np.ones_like(lx), lx]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    return float(coef[1])
