"""Basis enumeration and exact sphere integration, checked against
brute-force quadrature (the formula is verified before anything else uses it)."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focktrace.core import (SpherePolynomial, degree_multiplicity,
                            enumerate_basis, sphere_equal, sphere_integral,
                            sphere_norm_sq, sphere_surface_area)


def test_enumerate_basis_one_variable():
    assert enumerate_basis(1, 2) == [(0,), (1,), (2,)]


def test_enumerate_basis_graded_lex():
    assert enumerate_basis(2, 1) == [(0, 0), (1, 0), (0, 1)]
    basis = enumerate_basis(2, 3)
    degrees = [sum(a) for a in basis]
    assert degrees == sorted(degrees)
    # within a degree: descending lexicographic
    assert basis[1:3] == [(1, 0), (0, 1)]
    assert basis[3:6] == [(2, 0), (1, 1), (0, 2)]


def test_enumerate_basis_count():
    assert len(enumerate_basis(2, 60)) == 1891
    assert len(enumerate_basis(2, 60)) == math.comb(62, 2)
    for n, D in [(1, 9), (2, 7), (3, 5)]:
        assert len(enumerate_basis(n, D)) == sum(
            degree_multiplicity(n, k) for k in range(D + 1))


def test_degree_multiplicity():
    assert degree_multiplicity(1, 7) == 1
    assert degree_multiplicity(2, 3) == 4
    # enumeration oracle
    assert degree_multiplicity(3, 2) == sum(
        1 for a in enumerate_basis(3, 2) if sum(a) == 2)
    assert degree_multiplicity(3, 2) == 6


def _circle_integral_oracle(p, q, m=256):
    # n=1: (1/2pi) integral e^{i(p-q)theta} dtheta, trapezoid is exact
    theta = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
    z = np.exp(1j * theta)
    return np.mean(z ** p[0] * np.conj(z) ** q[0])


def _s3_integral_oracle(p, q, n_phi=48, n_theta=32):
    # zeta = (cos(phi) e^{i t1}, sin(phi) e^{i t2}), dsigma normalized;
    # Gauss-Legendre in phi, trapezoid in the angles (exact for trig polys)
    x, w = np.polynomial.legendre.leggauss(n_phi)
    phi = (x + 1.0) * (np.pi / 4.0)
    wphi = w * (np.pi / 4.0)
    t1 = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    t2 = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    c, s = np.cos(phi), np.sin(phi)
    rad = (c ** (p[0] + q[0])) * (s ** (p[1] + q[1])) * c * s * wphi
    a1 = np.mean(np.exp(1j * (p[0] - q[0]) * t1))
    a2 = np.mean(np.exp(1j * (p[1] - q[1]) * t2))
    total = rad.sum() * a1 * a2 * (2 * np.pi) ** 2
    return total / (2 * np.pi**2)


def test_sphere_integral_against_circle_quadrature():
    for p in range(5):
        for q in range(5):
            P = SpherePolynomial.monomial(1, (p,), (q,))
            got = sphere_integral(P)
            ref = _circle_integral_oracle((p,), (q,))
            assert abs(got - ref) < 1e-13


def test_sphere_integral_against_s3_quadrature():
    for p in enumerate_basis(2, 3):
        for q in enumerate_basis(2, 3):
            P = SpherePolynomial.monomial(2, p, q)
            got = sphere_integral(P)
            ref = _s3_integral_oracle(p, q)
            assert abs(got - ref) < 1e-12, (p, q, got, ref)


def test_sphere_integral_examples():
    assert sphere_integral(SpherePolynomial.constant(3)) == 1.0
    assert sphere_integral(SpherePolynomial.monomial(2, (1, 0), (1, 0))) == pytest.approx(0.5)
    assert sphere_integral(SpherePolynomial.monomial(2, (2, 0), (2, 0))) == pytest.approx(1 / 3)
    assert sphere_integral(SpherePolynomial.monomial(2, (1, 0), (0, 1))) == 0.0


def test_sphere_equal_examples():
    n = 2
    rel = (SpherePolynomial.monomial(n, (1, 0), (1, 0))
           + SpherePolynomial.monomial(n, (0, 1), (0, 1)))
    assert sphere_equal(rel, SpherePolynomial.constant(n))
    assert not sphere_equal(SpherePolynomial.monomial(n, (1, 0), (0, 0)),
                            SpherePolynomial.monomial(n, (0, 1), (0, 0)))
    lhs = SpherePolynomial.monomial(n, (1, 0), (1, 0)) * rel
    assert sphere_equal(lhs, SpherePolynomial.monomial(n, (1, 0), (1, 0)))


def test_surface_area_constant():
    assert sphere_surface_area(1) == pytest.approx(2 * math.pi)
    assert sphere_surface_area(2) == pytest.approx(2 * math.pi**2)
    assert sphere_surface_area(3) == pytest.approx(math.pi**3)


def test_norm_identity_polar_factorization():
    # sphere_integral(|z^p|^2) * area * Gamma(|p|+n)/(2 gamma^(|p|+n))
    # equals the Gaussian monomial norm pi^n p!/gamma^(n+|p|)
    from focktrace.fock_matrices import FockContext, monomial_norm_sq
    for n, p, gamma in [(1, (3,), 1.0), (2, (2, 1), 1.0), (2, (1, 0), 2.0),
                        (3, (1, 1, 0), 0.7)]:
        P = SpherePolynomial.monomial(n, p, p)
        lhs = (sphere_integral(P).real * sphere_surface_area(n)
               * 0.5 * math.gamma(sum(p) + n) / gamma ** (sum(p) + n))
        rhs = monomial_norm_sq(FockContext(n, gamma), p) * (gamma / math.pi) ** n \
            * math.pi ** n / gamma ** n * gamma ** n
        # rhs simplifies to pi^n p!/gamma^(n+|p|)
        rhs = math.pi**n * math.prod(math.factorial(a) for a in p) / gamma ** (n + sum(p))
        assert lhs == pytest.approx(rhs, rel=1e-12)


@st.composite
def sphere_polys(draw, n):
    terms = {}
    count = draw(st.integers(1, 4))
    for _ in range(count):
        p = tuple(draw(st.integers(0, 2)) for _ in range(n))
        q = tuple(draw(st.integers(0, 2)) for _ in range(n))
        c = complex(draw(st.floats(-2, 2)), draw(st.floats(-2, 2)))
        terms[(p, q)] = terms.get((p, q), 0) + c
    return SpherePolynomial(n, terms)


@settings(max_examples=40, deadline=None)
@given(sphere_polys(2))
def test_integral_conjugation(P):
    assert sphere_integral(P.conj()) == pytest.approx(
        sphere_integral(P).conjugate(), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(sphere_polys(3))
def test_integral_permutation_invariance(P):
    base = sphere_integral(P)
    for perm in [(1, 0, 2), (2, 1, 0), (1, 2, 0)]:
        assert sphere_integral(P.permute(perm)) == pytest.approx(base, abs=1e-12)


def test_algebra_basics():
    n = 2
    a = SpherePolynomial.monomial(n, (1, 0), (0, 0), 2.0)
    b = SpherePolynomial.monomial(n, (0, 0), (1, 0), 1j)
    prod = a * b
    assert prod.terms == {((1, 0), (1, 0)): 2j}
    assert (a - a).is_zero()
    zeta = np.array([0.6 + 0.3j, 0.2 - 0.1j])
    val = (a + b).evaluate(zeta)
    assert val == pytest.approx(2 * zeta[0] + 1j * np.conj(zeta[0]))
    assert sphere_norm_sq(SpherePolynomial.constant(n, 3.0)) == pytest.approx(9.0)
