"""Backend equivalence and correctness of the recurrence/summation kernels."""

import math

import numpy as np
import pytest

from focktrace import _kernels
from focktrace.fock_matrices import radial_moment_hp


def normalized_oracle(d, t, gamma):
    val = radial_moment_hp(d, t, gamma)
    import mpmath as mp
    with mp.workdps(30):
        scaled = val * mp.mpf(gamma) ** (d + 1) / mp.factorial(d)
        return float(scaled)


def test_ladder_row_matches_high_precision_oracle():
    gamma = 1.0
    ones = np.ones(2001)
    base1 = float(normalized_oracle(0, -2.0, gamma))
    row1 = _kernels.ladder_row(ones, base1, gamma)
    # row1[d] approximates gamma^(d+1)/d! * integral u^d (1+u)^-1 e^-u
    for d in [0, 1, 7, 60, 500, 2000]:
        ref = normalized_oracle(d, -2.0, gamma)
        assert abs(row1[d] - ref) <= 5e-12 * abs(ref)


def test_pair_rows_matches_high_precision_oracle():
    gamma = 1.7
    a0 = normalized_oracle(0, 1.0, gamma)
    b0 = normalized_oracle(0, -1.0, gamma)
    A, B = _kernels.pair_rows(0.5, a0, b0, gamma, 1500)
    for d in [0, 3, 33, 400, 1500]:
        assert abs(B[d] - normalized_oracle(d, -1.0, gamma)) <= 5e-12 * abs(
            normalized_oracle(d, -1.0, gamma))
        assert abs(A[d] - normalized_oracle(d, 1.0, gamma)) <= 5e-12 * abs(
            normalized_oracle(d, 1.0, gamma))


def test_raise_row_consistency():
    # m_{s+1}[d] = m_s[d] + (d+1)/gamma * m_s[d+1], checked against the
    # independent pair construction at s+1
    gamma = 1.0
    a0 = normalized_oracle(0, 1.0, gamma)
    b0 = normalized_oracle(0, -1.0, gamma)
    A, B = _kernels.pair_rows(0.5, a0, b0, gamma, 300)
    raised = _kernels.raise_row(A, gamma)  # should be m_{3/2}
    for d in [0, 5, 100, 299]:
        ref = normalized_oracle(d, 3.0, gamma)
        assert abs(raised[d] - ref) <= 1e-11 * abs(ref)


def test_partial_sums_at_matches_fsum():
    rng = np.random.default_rng(3)
    values = rng.normal(size=400)
    mults = rng.integers(1, 9, size=400).astype(np.int64)
    expanded = np.repeat(values, mults)
    ranks = np.array([0, 1, 17, 100, expanded.size - 1], dtype=np.int64)
    out = _kernels.partial_sums_at(values, mults, ranks)
    for r, got in zip(ranks, out):
        ref = math.fsum(expanded[: r + 1])
        assert abs(got - ref) <= 1e-14 * (1 + abs(ref))


@pytest.mark.parametrize("name", sorted(_kernels._PY_IMPLS))
def test_backends_agree(name):
    if "numba" not in _kernels.IMPLS:
        pytest.skip("numba backend not active")
    py = _kernels.IMPLS["python"][name]
    nb = _kernels.IMPLS["numba"][name]
    rng = np.random.default_rng(11)
    if name == "ladder_row":
        prev = rng.random(500) + 0.5
        a = py(prev, 0.3, 1.3)
        b = nb(prev, 0.3, 1.3)
        np.testing.assert_allclose(a, b, rtol=0, atol=0)
    elif name == "pair_rows":
        a = py(0.5, 1.2, 0.7, 1.1, 400)
        b = nb(0.5, 1.2, 0.7, 1.1, 400)
        np.testing.assert_allclose(a[0], b[0], rtol=0, atol=0)
        np.testing.assert_allclose(a[1], b[1], rtol=0, atol=0)
    elif name == "raise_row":
        row = rng.random(300) + 0.1
        np.testing.assert_allclose(py(row, 2.0), nb(row, 2.0), rtol=0, atol=0)
    elif name == "partial_sums_at":
        values = rng.normal(size=200)
        mults = rng.integers(1, 5, size=200).astype(np.int64)
        ranks = np.array([0, 3, 50, int(mults.sum()) - 1], dtype=np.int64)
        np.testing.assert_allclose(py(values, mults, ranks),
                                   nb(values, mults, ranks), rtol=0, atol=0)
