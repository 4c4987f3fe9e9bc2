"""Multi-index arithmetic, graded monomial bases, and exact integration of
polynomials on the unit sphere of C^n.

Multi-indices are plain tuples of nonnegative ints.  The global basis order
is graded: total degree first, then descending lexicographic within a degree.
Every matrix in the package indexes rows/columns this way.

Integrals are taken against the *normalized* surface measure (total mass 1);
`sphere_surface_area` supplies the single conversion constant to the
unnormalized measure.
"""

from __future__ import annotations

import math

import numpy as np

# factorials/binomials switch from exact integer arithmetic to log-Gamma
# above this degree
_EXACT_FACTORIAL_LIMIT = 10_000


def factorial(k: int) -> float:
    if k < 0:
        raise ValueError("negative factorial")
    if k <= _EXACT_FACTORIAL_LIMIT:
        return float(math.factorial(k))
    return math.exp(math.lgamma(k + 1))


def log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


def binomial(a: int, b: int) -> int:
    if b < 0 or b > a:
        return 0
    if a <= _EXACT_FACTORIAL_LIMIT:
        return math.comb(a, b)
    return int(round(math.exp(math.lgamma(a + 1) - math.lgamma(b + 1)
                              - math.lgamma(a - b + 1))))


def degree(alpha) -> int:
    return sum(alpha)


def mi_factorial(alpha) -> float:
    out = 1.0
    for a in alpha:
        out *= factorial(a)
    return out


def mi_add(alpha, beta):
    return tuple(a + b for a, b in zip(alpha, beta))


def mi_sub(alpha, beta):
    return tuple(a - b for a, b in zip(alpha, beta))


def unit_index(n: int, j: int):
    """e_j as a multi-index, j being 1-based."""
    return tuple(1 if i == j - 1 else 0 for i in range(n))


def rising_product(alpha, p) -> float:
    """(alpha+p)! / alpha! as a float, computed without large factorials."""
    out = 1.0
    for a, k in zip(alpha, p):
        for l in range(1, k + 1):
            out *= a + l
    return out


def compositions(k: int, n: int):
    """All multi-indices of length n and total degree k, descending lex."""
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in compositions(k - first, n - 1):
            yield (first,) + rest


def enumerate_basis(n: int, D: int):
    """All multi-indices with |alpha| <= D in graded descending-lex order."""
    if n < 1 or D < 0:
        raise ValueError("need n >= 1 and D >= 0")
    out = []
    for k in range(D + 1):
        out.extend(compositions(k, n))
    return out


def degree_multiplicity(n: int, k: int) -> int:
    """Number of multi-indices of length n with |alpha| = k."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return binomial(k + n - 1, k)


def sphere_surface_area(n: int) -> float:
    """Surface area of the unit sphere in C^n (real dimension 2n-1)."""
    return 2.0 * math.pi**n / factorial(n - 1)


class SpherePolynomial:
    """Finite sum of monomials zeta^p conj(zeta)^q restricted to the unit
    sphere of C^n.

    The representation is not unique on the sphere (|zeta|^2 = 1); use
    `sphere_equal` for semantic comparison.  Terms with exactly zero
    coefficient are not stored.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for (p, q), c in (terms.items() if isinstance(terms, dict) else terms):
                if c != 0:
                    key = (tuple(p), tuple(q))
                    c0 = self.terms.get(key, 0.0) + complex(c)
                    if c0 == 0:
                        self.terms.pop(key, None)
                    else:
                        self.terms[key] = c0

    @classmethod
    def monomial(cls, n, p, q, c=1.0):
        return cls(n, {(tuple(p), tuple(q)): c})

    @classmethod
    def constant(cls, n, c=1.0):
        z = (0,) * n
        return cls(n, {(z, z): c})

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")

    def __add__(self, other):
        if not isinstance(other, SpherePolynomial):
            other = SpherePolynomial.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            c0 = out.get(k, 0.0) + c
            if c0 == 0:
                out.pop(k, None)
            else:
                out[k] = c0
        return SpherePolynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return SpherePolynomial(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SpherePolynomial):
            other = SpherePolynomial.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SpherePolynomial):
            return SpherePolynomial(
                self.n, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        out = {}
        for (p1, q1), c1 in self.terms.items():
            for (p2, q2), c2 in other.terms.items():
                key = (mi_add(p1, p2), mi_add(q1, q2))
                c0 = out.get(key, 0.0) + c1 * c2
                out[key] = c0
        return SpherePolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SpherePolynomial.constant(self.n)
        for _ in range(k):
            out = out * self
        return out

    def conj(self):
        return SpherePolynomial(
            self.n, {(q, p): c.conjugate() for (p, q), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, zeta) -> complex:
        zeta = np.asarray(zeta, dtype=complex)
        out = 0.0 + 0.0j
        for (p, q), c in self.terms.items():
            val = c
            for i in range(self.n):
                if p[i]:
                    val *= zeta[i] ** p[i]
                if q[i]:
                    val *= np.conj(zeta[i]) ** q[i]
            out += val
        return complex(out)

    def permute(self, perm):
        """Apply a coordinate permutation: zeta_i -> zeta_perm[i]."""
        out = {}
        for (p, q), c in self.terms.items():
            p2 = tuple(p[perm[i]] for i in range(self.n))
            q2 = tuple(q[perm[i]] for i in range(self.n))
            out[(p2, q2)] = out.get((p2, q2), 0.0) + c
        return SpherePolynomial(self.n, out)

    def __repr__(self):
        if not self.terms:
            return f"SpherePolynomial(n={self.n}, 0)"
        bits = []
        for (p, q), c in sorted(self.terms.items()):
            bits.append(f"{c:+.6g}*z^{list(p)}*zb^{list(q)}")
        return f"SpherePolynomial(n={self.n}, {' '.join(bits)})"


def _monomial_integral(n: int, p, q) -> float:
    # normalized measure: vanishes unless p == q, else (n-1)! p! / (n-1+|p|)!
    if p != q:
        return 0.0
    dp = degree(p)
    if dp + n - 1 <= _EXACT_FACTORIAL_LIMIT:
        num = math.factorial(n - 1)
        for a in p:
            num *= math.factorial(a)
        return num / math.factorial(n - 1 + dp)
    logv = log_factorial(n - 1) - log_factorial(n - 1 + dp)
    for a in p:
        logv += log_factorial(a)
    return math.exp(logv)


def sphere_integral(P: SpherePolynomial) -> complex:
    """Integral of P over the unit sphere against the normalized measure."""
    out = 0.0 + 0.0j
    for (p, q), c in P.terms.items():
        if p == q:
            out += c * _monomial_integral(P.n, p, q)
    return complex(out)


def sphere_norm_sq(P: SpherePolynomial) -> float:
    """L^2 norm squared against the normalized measure, computed exactly."""
    return sphere_integral(P * P.conj()).real


def sphere_equal(P: SpherePolynomial, Q: SpherePolynomial,
                 tol: float = 1e-10) -> bool:
    """Semantic equality modulo the relation |zeta|^2 = 1, via the Gram form."""
    if P.n != Q.n:
        raise ValueError("dimension mismatch")
    diff = P - Q
    return sphere_norm_sq(diff) <= tol * (1.0 + sphere_norm_sq(P) + sphere_norm_sq(Q))
