"""Hot numeric kernels: scaled-moment recurrences and compensated partial sums.

The recurrences advance the normalized radial moments

    m_s[d] = gamma^(d+1) / d! * integral_0^inf u^d (1+u)^s e^(-gamma u) du

degree by degree.  They are the per-degree workhorse of the diagonal
spectral path and run for up to ~10^6 steps, so they are JIT-compiled with
numba by default.  Setting the environment variable
``FOCKTRACE_DISABLE_NUMBA=1`` selects pure-Python fallbacks (identical
semantics, much slower); ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np


def _ladder_row(prev, out0, gamma):
    # m_{s-1}[d] = (gamma/d) * (m_s[d-1] - m_{s-1}[d-1]); damped, stable.
    out = np.empty_like(prev)
    out[0] = out0
    for d in range(1, prev.shape[0]):
        out[d] = (gamma / d) * (prev[d - 1] - out[d - 1])
    return out


def _pair_rows(s_plus_one, a0, b0, gamma, dmax):
    # coupled advance of (A, B) = (m_{s+1}, m_s) for non-integer s in (-1, 0):
    #   B[d] = (gamma/d) * (A[d-1] - B[d-1])        (algebraic identity)
    #   A[d] = A[d-1] + ((s+1)/gamma) * B[d]        (integration by parts)
    A = np.empty(dmax + 1)
    B = np.empty(dmax + 1)
    A[0] = a0
    B[0] = b0
    for d in range(1, dmax + 1):
        B[d] = (gamma / d) * (A[d - 1] - B[d - 1])
        A[d] = A[d - 1] + (s_plus_one / gamma) * B[d]
    return A, B


def _raise_row(row, gamma):
    # m_{s+1}[d] = m_s[d] + ((d+1)/gamma) * m_s[d+1]; output one shorter.
    out = np.empty(row.shape[0] - 1)
    for d in range(out.shape[0]):
        out[d] = row[d] + ((d + 1) / gamma) * row[d + 1]
    return out


def _partial_sums_at(values, mults, ranks):
    """Neumaier-compensated partial sums of a run-length sequence.

    ranks are 0-based inclusive: result[i] = sum of the first ranks[i]+1
    sequence elements, where run j contributes mults[j] copies of values[j].
    """
    out = np.empty(ranks.shape[0])
    s = 0.0
    c = 0.0
    count = 0
    ri = 0
    nr = ranks.shape[0]
    for i in range(values.shape[0]):
        if ri >= nr:
            break
        v = values[i]
        m = mults[i]
        while ri < nr and ranks[ri] < count + m:
            out[ri] = s + c + (ranks[ri] - count + 1) * v
            ri += 1
        x = m * v
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        count += m
    while ri < nr:
        out[ri] = s + c
        ri += 1
    return out


_PY_IMPLS = {
    "ladder_row": _ladder_row,
    "pair_rows": _pair_rows,
    "raise_row": _raise_row,
    "partial_sums_at": _partial_sums_at,
}

IMPLS = {"python": _PY_IMPLS}

_disable = os.environ.get("FOCKTRACE_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)

if not _disable:
    try:
        from numba import njit

        IMPLS["numba"] = {
            name: njit(cache=True)(fn) for name, fn in _PY_IMPLS.items()
        }
    except ImportError:
        pass

ACTIVE_BACKEND = "numba" if "numba" in IMPLS else "python"
_active = IMPLS[ACTIVE_BACKEND]

ladder_row = _active["ladder_row"]
pair_rows = _active["pair_rows"]
raise_row = _active["raise_row"]
partial_sums_at = _active["partial_sums_at"]
