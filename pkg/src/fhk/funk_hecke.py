"""Bizonal kernels on the unit disk and the eigenvalues of the integral
operators they generate on the sphere of C^q.

Two eigenvalue routes are provided: an integral over the disk against the
probability measure nu_q, and an integral over the cylinder [0, 2pi] x B_q.
Both are checked against direct quadrature of the operator on the sphere.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import ParameterError, PreconditionError
from .harmonics import PolyZZbar, laplacian, poly_eval
from .quadrature import (ball_rule, cylinder_points, cylinder_rule, disk_rule_nu,
                         frame_from_pole, integrate, sphere_rule, weighted_sum)
from .special_poly import ball_volume, check_index, disk_poly, jacobi_normalized, sphere_area

# polynomial integrands are sized exactly; these apply to everything else
TRANSCENDENTAL_NODES = 64
CONVERGENCE_TOL = 1e-9
MAX_NODES = 1024
HARMONIC_TOL = 1e-8
VARIANTS = ("KzwYbar", "KzwY", "KwzY", "KwzYbar")
# exactness degree of full (non pole-adapted) sphere rules for non-polynomial integrands
DIRECT_SPHERE_DEGREE = {1: 40, 2: 30, 3: 18, 4: 12}


@dataclass(frozen=True)
class KernelSpec:
    """One of the built-in kernels K: B_2 -> C.

    kinds: ``constant`` (c), ``monomial`` (a, b) = zeta^a conj(zeta)^b,
    ``disk_poly`` (m, n) = R_{m,n}^{q-2}, ``exp_re`` = exp(Re zeta),
    ``power_abs`` (p) = |zeta|^{2p}.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        arity = {"constant": 1, "monomial": 2, "disk_poly": 2, "exp_re": 0, "power_abs": 1}
        if self.kind not in arity:
            raise ParameterError(f"unknown kernel kind {self.kind!r}")
        if len(self.params) != arity[self.kind]:
            raise ParameterError(f"{self.kind} takes {arity[self.kind]} parameter(s)")
        if self.kind in ("monomial", "disk_poly") and min(self.params) < 0:
            raise ParameterError("kernel indices must be nonnegative")
        if self.kind == "power_abs" and self.params[0] < 0:
            raise ParameterError("power_abs exponent must be nonnegative")

    @classmethod
    def constant(cls, c=1.0):
        return cls("constant", (complex(c),))

    @classmethod
    def monomial(cls, a, b):
        return cls("monomial", (int(a), int(b)))

    @classmethod
    def disk(cls, m, n):
        return cls("disk_poly", (int(m), int(n)))

    @classmethod
    def exp_re(cls):
        return cls("exp_re")

    @classmethod
    def power_abs(cls, p):
        return cls("power_abs", (float(p),))

    @classmethod
    def parse(cls, token):
        """Parse ``const:<c>``, ``mono:<a>,<b>``, ``disk:<m>,<n>``, ``expre`` or ``absp:<p>``."""
        from .literals import parse_complex

        name, _, arg = token.strip().partition(":")
        try:
            if name == "const":
                return cls.constant(parse_complex(arg))
            if name == "mono":
                a, b = arg.split(",")
                return cls.monomial(int(a), int(b))
            if name == "disk":
                m, n = arg.split(",")
                return cls.disk(int(m), int(n))
            if name == "expre" and not arg:
                return cls.exp_re()
            if name == "absp":
                return cls.power_abs(float(arg))
        except ValueError as exc:
            raise ParameterError(f"malformed kernel token {token!r}: {exc}") from None
        raise ParameterError(f"unknown kernel token {token!r}")

    @property
    def token(self):
        if self.kind == "constant":
            c = self.params[0]
            return f"const:{c.real:g}" if c.imag == 0 else f"const:{c.real:g}{c.imag:+g}i"
        if self.kind == "monomial":
            return "mono:%d,%d" % self.params
        if self.kind == "disk_poly":
            return "disk:%d,%d" % self.params
        if self.kind == "exp_re":
            return "expre"
        return f"absp:{self.params[0]:g}"

    @property
    def degree(self):
        """Total degree in (zeta, conj zeta) for polynomial kernels, else None."""
        if self.kind == "constant":
            return 0
        if self.kind in ("monomial", "disk_poly"):
            return sum(self.params)
        if self.kind == "power_abs" and float(self.params[0]).is_integer():
            return 2 * int(self.params[0])
        return None

    def bind(self, q):
        """Vectorized callable zeta -> K(zeta) (disk kernels depend on q)."""
        kind, p = self.kind, self.params
        if kind == "constant":
            return lambda z: np.full(np.shape(z), p[0], dtype=complex)
        if kind == "monomial":
            return lambda z: np.asarray(z) ** p[0] * np.conj(z) ** p[1]
        if kind == "disk_poly":
            return lambda z: disk_poly(p[0], p[1], q, z)
        if kind == "exp_re":
            return lambda z: np.exp(np.real(z)).astype(complex)
        return lambda z: ((np.real(z) ** 2 + np.imag(z) ** 2) ** p[0]).astype(complex)


def builtin_kernels():
    """One representative of every kernel kind, used by the verification suites."""
    return [KernelSpec.constant(1.0), KernelSpec.monomial(2, 1), KernelSpec.disk(2, 1),
            KernelSpec.exp_re(), KernelSpec.power_abs(2)]


def _resolve(kernel, q, degree=None):
    if isinstance(kernel, KernelSpec):
        return kernel.bind(q), kernel.degree, kernel.token
    if callable(kernel):
        return kernel, degree, getattr(kernel, "__name__", "callable")
    raise ParameterError(f"kernel must be a KernelSpec or a callable, got {type(kernel).__name__}")


@dataclass(frozen=True)
class Eigenvalue:
    m: int
    n: int
    q: int
    value: complex
    route: str
    rule_meta: dict


def _refine(evaluate, start):
    """Double the node count until two successive values differ by < CONVERGENCE_TOL."""
    n = start
    prev = evaluate(n)
    while True:
        nxt = evaluate(2 * n)
        if abs(nxt - prev) < CONVERGENCE_TOL:
            return nxt, 2 * n
        if 2 * n >= MAX_NODES:
            warnings.warn(f"eigenvalue quadrature not converged at {2 * n} nodes "
                          f"(last change {abs(nxt - prev):.2e})", RuntimeWarning, stacklevel=3)
            return nxt, 2 * n
        n, prev = 2 * n, nxt


def _combined_degree(kdeg, m, n):
    return max(kdeg + m + n, 16)


def eigenvalue_disk(kernel, m, n, q, rule=None, degree=None):
    """lambda_{m,n}(K) = omega_q * int_{B_2} K(z) conj(R_{m,n}(z)) d nu_q(z)."""
    m, n, q = check_index(m, n, q)
    fn, kdeg, label = _resolve(kernel, q, degree)

    def integrand(z):
        zeta = z[:, 0]
        return fn(zeta) * np.conj(disk_poly(m, n, q, zeta))

    def at(rule):
        if rule.domain != "disk_nu" or rule.q != q:
            raise ParameterError(f"need a disk_nu rule for q={q}")
        return sphere_area(q) * integrate(integrand, rule)

    if rule is not None:
        meta = {"n_radial": rule.meta.get("n_radial"), "n_theta": rule.meta.get("n_theta")}
        return Eigenvalue(m, n, q, at(rule), "disk", meta)
    if kdeg is not None:
        d = _combined_degree(kdeg, m, n)
        r = disk_rule_nu(q, d // 4 + 1, d + 1)
        return Eigenvalue(m, n, q, at(r), "disk", dict(r.meta, exact=True))
    value, nodes = _refine(lambda k: at(disk_rule_nu(q, k, k)), TRANSCENDENTAL_NODES)
    return Eigenvalue(m, n, q, value, "disk", {"n_radial": nodes, "n_theta": nodes, "exact": False})


def eigenvalue_cylinder(kernel, m, n, q, rule=None, degree=None):
    """Lambda_{m,n}(K): the integral of K(zeta) conj(R_{m,n}(zeta)), zeta = sqrt(1-|eta|^2) e^{i theta},
    over the cylinder [0, 2pi] x B_q."""
    m, n, q = check_index(m, n, q)
    fn, kdeg, label = _resolve(kernel, q, degree)

    def at(rule):
        if rule.domain != "cylinder" or rule.q != q:
            raise ParameterError(f"need a cylinder rule for q={q}")
        zeta = cylinder_points(rule)[:, q - 1]
        vals = fn(zeta) * np.conj(disk_poly(m, n, q, zeta))
        return integrate(lambda _: vals, rule)

    if rule is not None:
        return Eigenvalue(m, n, q, at(rule), "cylinder", {"nodes": len(rule)})
    if kdeg is not None:
        d = _combined_degree(kdeg, m, n)
        # the integrand sees eta only through |eta|
        r = cylinder_rule(q, d, sphere_degree=0)
        return Eigenvalue(m, n, q, at(r), "cylinder", {"degree": d, "exact": True})
    value, nodes = _refine(
        lambda k: at(cylinder_rule(q, 0, sphere_degree=0, n_theta=k, n_radial=k)),
        TRANSCENDENTAL_NODES)
    return Eigenvalue(m, n, q, value, "cylinder", {"n_radial": nodes, "n_theta": nodes, "exact": False})


def bidegree_of(poly):
    degs = poly.bidegrees
    if len(degs) != 1:
        raise PreconditionError(f"expected a bihomogeneous polynomial, got bidegrees {sorted(degs)}")
    return next(iter(degs))


def sphere_degree_for(kdeg, extra, q):
    """Exactness degree of the sphere rule used for a kernel of degree `kdeg` times
    a polynomial of degree `extra`; non-polynomial kernels get a q-dependent budget."""
    if kdeg is not None:
        return kdeg + extra
    return extra + (40 if q == 1 else 30)


def apply_funk_hecke(kernel, Y, w, variant="KzwYbar", rule=None, degree=None):
    """Direct sphere quadrature of the operator for one of the four variants.

    KzwYbar: int K(<z,w>) conj(Y(z));  KzwY: int K(<z,w>) Y(z);
    KwzY: int K(<w,z>) Y(z);           KwzYbar: int K(<w,z>) conj(Y(z)).
    """
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if not isinstance(Y, PolyZZbar):
        raise ParameterError("Y must be a PolyZZbar")
    if laplacian(Y).coefficient_norm() > HARMONIC_TOL:
        raise PreconditionError("Y is not harmonic")
    q = Y.q
    m, n = bidegree_of(Y) if Y.terms else (0, 0)
    fn, kdeg, _ = _resolve(kernel, q, degree)
    w = np.asarray(w, dtype=complex)
    if rule is None:
        # rotate e_q onto w: the kernel then sees only the last coordinate, so
        # the inner levels need only the degree of Y
        rule = sphere_rule(q, sphere_degree_for(kdeg, m + n, q), inner_degree=m + n)
        z = frame_from_pole(w).apply(rule.nodes)
    else:
        z = rule.nodes
    inner = z @ np.conj(w)
    arg = inner if variant.startswith("Kzw") else np.conj(inner)
    yv = poly_eval(Y, z)
    if variant.endswith("bar"):
        yv = np.conj(yv)
    return weighted_sum(fn(arg) * yv, rule.weights)


def predicted_funk_hecke(kernel, Y, w, variant="KzwYbar", degree=None):
    """Eigenvalue times the value at the pole, as the Funk-Hecke identity predicts."""
    m, n = bidegree_of(Y) if Y.terms else (0, 0)
    q = Y.q
    mm, nn = (m, n) if variant in ("KzwYbar", "KwzY") else (n, m)
    lam = eigenvalue_cylinder(kernel, mm, nn, q, degree=degree).value
    yw = poly_eval(Y, np.asarray(w, dtype=complex))
    return lam * (np.conj(yw) if variant.endswith("bar") else yw)


def funk_hecke_residual(kernel, Y, w, variant="KzwYbar", degree=None):
    direct = apply_funk_hecke(kernel, Y, w, variant, degree=degree)
    return abs(direct - predicted_funk_hecke(kernel, Y, w, variant, degree=degree))


def _radial_route(fn, q, kdeg):
    """omega_{q-1} int_0^{2pi} int_0^1 K(t e^{i theta}) t (1-t^2)^{q-2} dt d theta,
    by Gauss-Legendre in t with the weight written out."""
    def at(nt, nr):
        x, wx = roots_legendre(nr)
        t = (x + 1) / 2
        wt = wx / 2 * t * (1 - t * t) ** (q - 2)
        ph = np.exp(2j * np.pi * np.arange(nt) / nt)
        zeta = (t[:, None] * ph[None, :]).ravel()
        wts = np.repeat(wt, nt) * (2 * np.pi / nt)
        return sphere_area(q - 1) * weighted_sum(fn(zeta), wts)

    if kdeg is not None:
        # after the angular sum: a polynomial in t of degree kdeg + 1 + 2(q-2)
        return at(kdeg + 1, (kdeg + 2 * q) // 2 + 1)
    return _refine(lambda k: at(k, k), TRANSCENDENTAL_NODES)[0]


def bizonal_sphere_integral(kernel, q, method="sphere", pole=None, degree=None):
    """int_{Omega_2q} K(<z, w>) d sigma_q(z) by one of four routes:
    ``sphere`` (direct), ``disk`` (omega_q times the nu_q integral), ``cylinder``
    or ``radial`` (one-dimensional radial integral times omega_{q-1})."""
    if int(q) != q or q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    fn, kdeg, _ = _resolve(kernel, q, degree)
    if method == "sphere":
        w = np.zeros(q, dtype=complex)
        w[-1] = 1
        if pole is not None:
            w = frame_from_pole(pole).pole
        deg = kdeg if kdeg is not None else DIRECT_SPHERE_DEGREE.get(q, 10)
        return integrate(lambda z: fn(z @ np.conj(w)), sphere_rule(q, deg))
    if method == "disk":
        return eigenvalue_disk(fn, 0, 0, q, degree=kdeg).value
    if method == "cylinder":
        return eigenvalue_cylinder(fn, 0, 0, q, degree=kdeg).value
    if method == "radial":
        return _radial_route(fn, q, kdeg)
    raise ParameterError(f"unknown method {method!r}")


@dataclass(frozen=True)
class BallIdentity:
    lhs: complex
    rhs: complex

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)


def ball_zonal_integral(kernel, w, q, degree=None, kernel_degree=None):
    """int_{B_{q+1}} K(<eta, w>) d eta against int_0^1 [int_sphere K(<rz, w>) d sigma] r^{2q-1} dr.

    `w` is any point of the closed ball of C^q. The left side uses the polar ball
    rule; the right side a Gauss-Legendre rule in r around a sphere rule.
    """
    fn, kdeg, _ = _resolve(kernel, max(q, 2), kernel_degree)
    w = np.asarray(w, dtype=complex)
    if degree is None:
        degree = sphere_degree_for(kdeg, 0, q)
    lhs = integrate(lambda eta: fn(eta @ np.conj(w)), ball_rule(q, degree))
    sph = sphere_rule(q, degree)
    x, wx = roots_legendre(degree // 2 + q + 1)
    r = (x + 1) / 2
    wr = wx / 2 * r ** (2 * q - 1)
    inner = sph.nodes @ np.conj(w)
    shells = [integrate(lambda _: fn(ri * inner), sph) for ri in r]
    return BallIdentity(lhs, weighted_sum(np.array(shells), wr))


def ball_radial_integral(radial, q, degree=16):
    """int_{B_{q+1}} K(|eta|) d eta against omega_q int_0^1 K(r) r^{2q-1} dr."""
    rule = ball_rule(q, degree, sphere_degree=0)
    norms = np.linalg.norm(rule.nodes, axis=1)
    lhs = integrate(lambda _: np.asarray(radial(norms), dtype=complex), rule)
    x, wx = roots_legendre(degree // 2 + q + 1)
    r = (x + 1) / 2
    rhs = sphere_area(q) * weighted_sum(np.asarray(radial(r), dtype=complex), wx / 2 * r ** (2 * q - 1))
    return BallIdentity(lhs, rhs)


def real_funk_hecke_eigenvalue(kernel, n, q_real, n_nodes=None):
    """Eigenvalue of f -> int_{S^{q-1}} K(x . y) f(x) dtau(x) on real harmonics of degree n.

    2 pi^{(q-1)/2} / Gamma((q-1)/2) * int_{-1}^{1} K(t) P_n(t) (1-t^2)^{(q-3)/2} dt
    with P_n the Gegenbauer polynomial of index (q-2)/2 normalized at 1.
    """
    if int(q_real) != q_real or q_real < 2:
        raise ParameterError(f"real dimension must be an integer >= 2, got {q_real}")
    if int(n) != n or n < 0:
        raise ParameterError(f"degree must be a nonnegative integer, got {n}")
    a = (q_real - 3) / 2
    x, wx = roots_jacobi(n_nodes or n + 40, a, a)
    # Gegenbauer index (q-2)/2 is the Jacobi case alpha = beta = (q-3)/2; at q = 2 this
    # is the Chebyshev limit, which jacobi_normalized handles directly
    pn = jacobi_normalized(n, a, a, x)
    pref = 2 * math.pi ** ((q_real - 1) / 2) / math.gamma((q_real - 1) / 2)
    return pref * weighted_sum(np.asarray(kernel(x)) * pn, wx).real


@dataclass(frozen=True)
class OrthogonalityCheck:
    value: complex
    expected: complex
    reduced: complex
    reduced_expected: complex | None

    @property
    def residual(self):
        return abs(self.value - self.expected)


def cylinder_orthogonality_check(mu, nu, m, n, q, rule=None):
    """Cylinder inner product of R_{mu,nu} and R_{m,n} next to c(m,n,q) delta delta.

    The B_q integral with theta removed is also returned; its closed form
    c(m,n,q)/(2pi) delta delta is only claimed when mu - nu = m - n.
    """
    from .special_poly import ortho_constant

    check_index(mu, nu, q)
    m, n, q = check_index(m, n, q)
    d = mu + nu + m + n
    if rule is None:
        rule = cylinder_rule(q, d, sphere_degree=0)
    zeta = cylinder_points(rule)[:, q - 1]
    vals = disk_poly(mu, nu, q, zeta) * np.conj(disk_poly(m, n, q, zeta))
    value = integrate(lambda _: vals, rule)
    hit = (mu, nu) == (m, n)
    expected = ortho_constant(m, n, q) if hit else 0.0
    brule = ball_rule(q - 1, d, sphere_degree=0)
    r = np.linalg.norm(brule.nodes, axis=1)
    rho = np.sqrt(np.maximum((1 - r) * (1 + r), 0.0))
    red_vals = disk_poly(mu, nu, q, rho) * np.conj(disk_poly(m, n, q, rho))
    reduced = integrate(lambda _: red_vals, brule)
    reduced_expected = None
    if mu - nu == m - n:
        reduced_expected = ortho_constant(m, n, q) / (2 * math.pi) if hit else 0.0
    return OrthogonalityCheck(value, complex(expected), reduced, reduced_expected)


def cylinder_mass(q):
    return 2 * math.pi * ball_volume(q - 1)
