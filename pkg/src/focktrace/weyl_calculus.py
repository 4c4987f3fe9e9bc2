"""Symbolic composition calculus for polynomial symbols on C^n: the star
product of operator composition, the Gaussian heat transform linking the two
quantizations, its layer-by-layer form on decaying symbols, and the leading
symbol of a Hankel product.

The Gaussian weight parameter gamma > 0 is passed explicitly; the composition
parameter is tied to it throughout (no independent rescaling is representable).
"""

from __future__ import annotations

import math

import numpy as np

from .core import enumerate_basis, mi_factorial, mi_sub
from .symbols import HomogeneousSymbol, RadialSymbol


def _require_polynomial(a: RadialSymbol, what: str):
    if not a.is_polynomial():
        raise ValueError(f"{what} requires a pure polynomial symbol (all t = 0)")


def _falling(p, alpha) -> float:
    """p!/(p-alpha)! componentwise; 0 when alpha exceeds p somewhere."""
    out = 1.0
    for a, b in zip(p, alpha):
        if b > a:
            return 0.0
        for l in range(b):
            out *= a - l
    return out


def poly_deriv(a: RadialSymbol, alpha, beta) -> RadialSymbol:
    """d^alpha/dz^alpha d^beta/dconj(z)^beta of a polynomial symbol."""
    _require_polynomial(a, "poly_deriv")
    out = {}
    for (p, q, _t), c in a.terms.items():
        f1 = _falling(p, alpha)
        if f1 == 0.0:
            continue
        f2 = _falling(q, beta)
        if f2 == 0.0:
            continue
        key = (mi_sub(p, alpha), mi_sub(q, beta), 0.0)
        out[key] = out.get(key, 0.0) + c * f1 * f2
    return RadialSymbol(a.n, out)


def _zdeg(a: RadialSymbol) -> int:
    return max((sum(p) for (p, _q, _t) in a.terms), default=0)


def _zbardeg(a: RadialSymbol) -> int:
    return max((sum(q) for (_p, q, _t) in a.terms), default=0)


def star(a: RadialSymbol, b: RadialSymbol, gamma: float) -> RadialSymbol:
    """Star product of polynomial symbols: the symbol of the composition of
    their quantized operators,

        sum_{alpha,beta} (-1)^|beta| / (alpha! beta! (-2 gamma)^(|alpha|+|beta|))
            * d^alpha dbar^beta a * d^beta dbar^alpha b.

    The sum is finite on polynomials; 1 is a two-sided unit.
    """
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    _require_polynomial(a, "star")
    _require_polynomial(b, "star")
    n = a.n
    amax = min(_zdeg(a), _zbardeg(b))
    bmax = min(_zbardeg(a), _zdeg(b))
    out = RadialSymbol(n)
    for alpha in enumerate_basis(n, amax):
        for beta in enumerate_basis(n, bmax):
            da = poly_deriv(a, alpha, beta)
            if da.is_zero():
                continue
            db = poly_deriv(b, beta, alpha)
            if db.is_zero():
                continue
            ka, kb = sum(alpha), sum(beta)
            coeff = (-1.0) ** kb / (
                mi_factorial(alpha) * mi_factorial(beta) * (-2.0 * gamma) ** (ka + kb))
            out = out + coeff * (da * db)
    return out


def heat_transform(a: RadialSymbol, gamma: float) -> RadialSymbol:
    """Heat flow at time 1/(8 gamma) applied to a polynomial symbol:
    sum_l Laplacian^l a / (l! (8 gamma)^l), a finite sum."""
    _require_polynomial(a, "heat_transform")
    out = RadialSymbol(a.n)
    term = a
    l = 0
    while not term.is_zero():
        out = out + (1.0 / (math.factorial(l) * (8.0 * gamma) ** l)) * term
        term = term.laplacian()
        l += 1
    return out


def heat_inverse(a: RadialSymbol, gamma: float) -> RadialSymbol:
    """Inverse of `heat_transform` on polynomials (alternating-sign series);
    heat_inverse(heat_transform(a)) == a exactly."""
    _require_polynomial(a, "heat_inverse")
    out = RadialSymbol(a.n)
    term = a
    l = 0
    while not term.is_zero():
        out = out + ((-1.0) ** l / (math.factorial(l) * (8.0 * gamma) ** l)) * term
        term = term.laplacian()
        l += 1
    return out


def heat_layers(S: RadialSymbol, N: int, gamma: float):
    """First N homogeneous layers of the heat transform of a decaying symbol.

    Layer k collects Laplacian^l / (l! (8 gamma)^l) applied to the symbol
    layer of degree (order - j), over j + 2l = k; it is homogeneous of degree
    order - k.  Positive-order symbols are rejected.
    """
    m = S.order()
    if m > 0:
        raise ValueError("heat_layers requires a symbol of order <= 0")
    sym_layers, _ = S.homogeneous_expansion(N)
    out = []
    for k in range(N):
        layer = HomogeneousSymbol(S.n, m - k)
        for l in range(0, k // 2 + 1):
            j = k - 2 * l
            term = sym_layers[j]
            for _ in range(l):
                term = term.laplacian()
            layer = layer + (1.0 / (math.factorial(l) * (8.0 * gamma) ** l)) * term
        out.append(layer)
    return out


def hankel_leading_symbol(f: RadialSymbol, g: RadialSymbol, gamma: float) -> RadialSymbol:
    """Leading symbol of the Hankel product pairing f against g:
    (1/gamma) sum_j d/dz_j conj(f) * d/dconj(z_j) g.

    Both symbols must have order <= 0; the result has order at most
    order(f) + order(g) - 2.
    """
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    if f.order() > 0 or g.order() > 0:
        raise ValueError("hankel_leading_symbol requires orders <= 0")
    fbar = f.conj()
    out = RadialSymbol(f.n)
    for j in range(1, f.n + 1):
        out = out + fbar.wirtinger(j, "holo") * g.wirtinger(j, "anti")
    return (1.0 / gamma) * out


def heat_quadrature(S: RadialSymbol, z: complex, gamma: float, nodes: int = 80) -> complex:
    """Numeric heat transform by Gauss-Hermite product quadrature (n = 1):

        (2 gamma / pi) * integral S(z + u) exp(-2 gamma |u|^2) du over C.

    Serves as the independent oracle for `heat_transform`/`heat_layers`.
    """
    if S.n != 1:
        raise NotImplementedError("quadrature oracle implemented for n = 1 only")
    s, w = np.polynomial.hermite.hermgauss(nodes)
    scale = 1.0 / math.sqrt(2.0 * gamma)
    U = scale * (s[:, None] + 1j * s[None, :])
    Z = complex(z) + U
    r2 = np.abs(Z) ** 2
    vals = np.zeros_like(Z)
    for (p, q, t), c in S.terms.items():
        term = c * (1.0 + r2) ** (t / 2.0)
        if p[0]:
            term = term * Z ** p[0]
        if q[0]:
            term = term * np.conj(Z) ** q[0]
        vals = vals + term
    total = np.einsum("i,j,ij->", w, w, vals)
    return complex(total / math.pi)
