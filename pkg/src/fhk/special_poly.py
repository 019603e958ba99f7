"""Jacobi, Gegenbauer and disk polynomials, plus the combinatorial constants
that go with them (sphere areas, harmonic dimensions, orthogonality constants).

Everything here is a pure function; array arguments are broadcast.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ParameterError

# |z| may exceed 1 by this much before we call it a domain error
DISK_TOL = 1e-12


class DiskIndex(NamedTuple):
    m: int
    n: int
    q: int


def check_index(m, n, q):
    if int(m) != m or int(n) != n or int(q) != q:
        raise ParameterError(f"indices must be integers, got ({m}, {n}, {q})")
    if m < 0 or n < 0:
        raise ParameterError(f"m and n must be nonnegative, got ({m}, {n})")
    if q < 2:
        raise ParameterError(f"disk polynomials need q >= 2, got q={q}")
    return DiskIndex(int(m), int(n), int(q))


def jacobi_value_at_one(k, alpha):
    """P_k^{(alpha, beta)}(1) = binom(k + alpha, k), independent of beta."""
    if float(alpha).is_integer() and alpha >= 0:
        return float(math.comb(k + int(alpha), k))
    return math.exp(math.lgamma(k + alpha + 1) - math.lgamma(k + 1) - math.lgamma(alpha + 1))


def _jacobi_raw(k, alpha, beta, x):
    """Classical Jacobi polynomial by the ascending three-term recurrence."""
    p0 = np.ones_like(x)
    if k == 0:
        return p0
    ab = alpha + beta
    p1 = (alpha + 1) + (ab + 2) * (x - 1) / 2
    for j in range(2, k + 1):
        c = 2 * j + ab
        a1 = 2 * j * (j + ab) * (c - 2)
        a2 = (c - 1) * (alpha * alpha - beta * beta)
        a3 = (c - 1) * c * (c - 2)
        a4 = 2 * (j + alpha - 1) * (j + beta - 1) * c
        p0, p1 = p1, ((a2 + a3 * x) * p1 - a4 * p0) / a1
    return p1


def jacobi_normalized(k, alpha, beta, x):
    """Jacobi polynomial of degree `k` divided by its value at x = 1.

    `x` may be a scalar or an array in [-1, 1]. The value at 1 is taken from
    the closed form binom(k + alpha, k) rather than from the recurrence.
    """
    if int(k) != k or k < 0:
        raise ParameterError(f"degree must be a nonnegative integer, got {k}")
    if alpha <= -1 or beta <= -1:
        raise ParameterError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    out = _jacobi_raw(int(k), float(alpha), float(beta), xa) / jacobi_value_at_one(int(k), alpha)
    return float(out) if scalar else out


def gegenbauer_normalized(n, lam, t):
    """C_n^lam(t) / C_n^lam(1), through the Jacobi case alpha = beta = lam - 1/2."""
    if lam <= 0:
        raise ParameterError(f"Gegenbauer parameter must be positive, got {lam}")
    return jacobi_normalized(n, lam - 0.5, lam - 0.5, t)


def disk_poly(m, n, q, z):
    """Disk polynomial R_{m,n}^{q-2}(z) on the closed unit disk.

    R(r e^{i theta}) = r^{|m-n|} e^{i(m-n) theta} P_{min(m,n)}^{(q-2, |m-n|)}(2r^2 - 1)
    with the Jacobi factor normalized to 1 at 1. Accepts scalar or array `z`.
    """
    m, n, q = check_index(m, n, q)
    scalar = np.ndim(z) == 0
    za = np.asarray(z, dtype=complex)
    r2 = za.real ** 2 + za.imag ** 2
    if np.any(r2 > (1 + DISK_TOL) ** 2):
        raise DomainError("disk polynomial evaluated outside the closed unit disk")
    r2 = np.minimum(r2, 1.0)
    d = m - n
    # z^d (or conj(z)^|d|) carries r^|d| e^{i d theta} without ever forming a phase,
    # so z = 0 yields exactly 0 when m != n
    if d >= 0:
        phase = za ** d
    else:
        phase = np.conj(za) ** (-d)
    radial = jacobi_normalized(min(m, n), q - 2, abs(d), 2 * r2 - 1)
    out = phase * radial
    return complex(out) if scalar else out


def sphere_area(q):
    """omega_q = 2 pi^q / (q-1)!, the surface measure of the unit sphere of C^q."""
    if int(q) != q or q < 1:
        raise ParameterError(f"q must be a positive integer, got {q}")
    return 2 * math.pi ** q / math.factorial(int(q) - 1)


def ball_volume(q):
    """Lebesgue measure pi^q / q! of the unit ball of C^q."""
    if int(q) != q or q < 1:
        raise ParameterError(f"q must be a positive integer, got {q}")
    return math.pi ** q / math.factorial(int(q))


def harmonic_dim(m, n, q):
    """Dimension d(m, n) of the space of spherical harmonics of bidegree (m, n) on C^q."""
    m, n, q = check_index(m, n, q)
    f = math.factorial
    num = (m + n + q - 1) * f(m + q - 2) * f(n + q - 2)
    den = f(q - 1) * f(m) * f(n) * f(q - 2)
    d, rem = divmod(num, den)
    assert rem == 0
    return d


def ortho_fraction(m, n, q):
    """Rational part of c(m, n, q); the constant itself is this times pi^q."""
    m, n, q = check_index(m, n, q)
    f = math.factorial
    return Fraction(2 * f(m) * f(n) * f(q - 2), (m + n + q - 1) * f(m + q - 2) * f(n + q - 2))


def ortho_constant(m, n, q):
    """c(m, n, q): squared norm of R_{m,n}^{q-2} over the cylinder [0, 2pi] x B_q."""
    return float(ortho_fraction(m, n, q)) * math.pi ** q
