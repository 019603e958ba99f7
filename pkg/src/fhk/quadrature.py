"""Deterministic product quadrature on the circle, the disk (with the measure
nu_q), the sphere of C^q, the ball of C^q and the cylinder [0, 2pi] x B_q.

Rules store their nodes as a complex array of shape (N, dim). Integrands are
vectorized: they receive that array and return N values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, EvaluationError, ParameterError
from .special_poly import ball_volume, sphere_area

SCHEMA_VERSION = 1
MIN_WEIGHT = 1e-300
DOMAINS = ("circle", "disk_nu", "sphere", "ball", "cylinder", "subsphere")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights for one of the supported measures.

    For ``cylinder`` rules the node rows are ``(eta_1, ..., eta_{q-1}, e^{i theta})``;
    use :func:`cylinder_points` to map them onto the sphere. For ``disk_nu`` and
    ``circle`` rules each row holds a single complex number.
    """

    domain: str
    q: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ParameterError(f"unknown domain {self.domain!r}")
        keep = self.weights >= MIN_WEIGHT
        if not np.all(keep):
            object.__setattr__(self, "nodes", self.nodes[keep])
            object.__setattr__(self, "weights", self.weights[keep])
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.weights)

    @property
    def measure_mass(self):
        return math.fsum(self.weights)

    def to_json(self):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "domain": self.domain,
            "q": self.q,
            "exact_degree": self.exact_degree,
            "nodes": [[[c.real, c.imag] for c in row] for row in self.nodes.tolist()],
            "weights": self.weights.tolist(),
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ParameterError(f"unsupported schema_version {doc.get('schema_version')}")
        nodes = np.array([[complex(re, im) for re, im in row] for row in doc["nodes"]], dtype=complex)
        return cls(doc["domain"], doc["q"], nodes.reshape(len(doc["weights"]), -1),
                   np.array(doc["weights"], dtype=float), doc["exact_degree"])


@dataclass(frozen=True, eq=False)
class UnitaryFrame:
    """Unitary matrix sending the last basis vector to ``pole``."""

    matrix: np.ndarray
    pole: np.ndarray

    @property
    def q(self):
        return len(self.pole)

    def apply(self, local):
        """Map rows of local coordinates (hyperplane part first, pole part last)."""
        return np.asarray(local) @ self.matrix.T


def _check_size(name, value):
    if int(value) != value or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value}")
    return int(value)


def _radial_count(degree):
    # after angular integration the radial integrand is a polynomial of degree
    # floor(degree / 2) in the Jacobi variable
    return degree // 4 + 1


def _gauss_jacobi(n, alpha, beta):
    x, w = roots_jacobi(n, alpha, beta)
    return np.asarray(x, dtype=float), np.asarray(w, dtype=float)


def _circle(n):
    k = np.arange(n)
    return np.exp(2j * np.pi * k / n), np.full(n, 2 * np.pi / n)


def circle_rule(n):
    """Equispaced rule on the unit circle; exact for e^{ik theta} with |k| < n."""
    n = _check_size("N", n)
    nodes, weights = _circle(n)
    return QuadratureRule("circle", 1, nodes[:, None], weights, n - 1)


def disk_rule_nu(q, n_radial, n_theta):
    """Tensor rule for the probability measure (q-1)/pi (1-|z|^2)^{q-2} dz on B_2."""
    if int(q) != q or q < 2:
        raise ParameterError(f"nu_q needs q >= 2, got {q}")
    q = int(q)
    n_radial = _check_size("Nr", n_radial)
    n_theta = _check_size("Nt", n_theta)
    x, wx = _gauss_jacobi(n_radial, q - 2, 0)
    r = np.sqrt((1 + x) / 2)
    wr = (q - 1) * wx / 2.0 ** (q - 1)
    ph, wt = _circle(n_theta)
    nodes = (r[:, None] * ph[None, :]).ravel()
    weights = (wr[:, None] * (wt[None, :] / (2 * np.pi))).ravel()
    degree = min(2 * (2 * n_radial - 1), n_theta - 1)
    return QuadratureRule("disk_nu", q, nodes[:, None], weights, degree,
                          {"n_radial": n_radial, "n_theta": n_theta})


def sphere_rule(q, degree, n_theta=None, n_radial=None, inner_degree=None):
    """Product rule for the surface measure of the unit sphere of C^q.

    Built recursively from d sigma_q = t (1-t^2)^{q-2} dt d theta d sigma_{q-1}
    with z = (sqrt(1-t^2) z', t e^{i theta}). Exact for polynomials in z, conj(z)
    of total degree <= `degree`; `n_theta` and `n_radial` override the per-level
    node counts for non-polynomial integrands. With `inner_degree` only the
    outermost level is sized for `degree`: suitable for f(z_q) g(z) with g of
    degree <= `inner_degree` and f arbitrary.
    """
    q = _check_size("q", q)
    if int(degree) != degree or degree < 0:
        raise ParameterError(f"degree must be a nonnegative integer, got {degree}")
    degree = int(degree)
    nt = n_theta or degree + 1
    nr = n_radial or _radial_count(degree)
    ph, wt = _circle(nt)
    if q == 1:
        return QuadratureRule("sphere", 1, ph[:, None], wt, degree)
    if inner_degree is None:
        inner = sphere_rule(q - 1, degree, n_theta, n_radial)
    else:
        inner = sphere_rule(q - 1, int(inner_degree))
    x, wx = _gauss_jacobi(nr, q - 2, 0)
    t = np.sqrt((1 + x) / 2)
    s = np.sqrt((1 - x) / 2)
    wr = wx / 2.0 ** q
    # node order: radial, angle, inner
    last = (t[:, None] * ph[None, :]).ravel()
    scale = np.repeat(s, nt)
    w_outer = (wr[:, None] * wt[None, :]).ravel()
    m = len(inner)
    nodes = np.empty((len(last) * m, q), dtype=complex)
    nodes[:, : q - 1] = (scale[:, None, None] * inner.nodes[None, :, :]).reshape(-1, q - 1)
    nodes[:, q - 1] = np.repeat(last, m)
    weights = (w_outer[:, None] * inner.weights[None, :]).ravel()
    exact = degree if inner_degree is None else min(degree, int(inner_degree))
    return QuadratureRule("sphere", q, nodes, weights, exact)


def ball_rule(q, degree, sphere_degree=None, n_radial=None):
    """Polar-coordinate rule for Lebesgue measure on the unit ball of C^q.

    The radial factor r^{2q-1} dr is a Gauss-Jacobi rule in 2r - 1, so odd
    powers of r (e.g. radial kernels K(|eta|)) are integrated exactly too. The
    angular factor is ``sphere_rule(q, sphere_degree)``, defaulting to `degree`.
    """
    q = _check_size("q", q)
    degree = int(degree)
    sd = degree if sphere_degree is None else int(sphere_degree)
    sph = sphere_rule(q, sd)
    nr = n_radial or degree // 2 + 1
    x, wx = _gauss_jacobi(nr, 0, 2 * q - 1)
    r = (1 + x) / 2
    wr = wx / 2.0 ** (2 * q)
    nodes = (r[:, None, None] * sph.nodes[None, :, :]).reshape(-1, q)
    weights = (wr[:, None] * sph.weights[None, :]).ravel()
    return QuadratureRule("ball", q, nodes, weights, min(degree, sd))


def cylinder_rule(q, degree, sphere_degree=None, n_theta=None, n_radial=None):
    """Rule for d eta d theta on [0, 2pi] x B_q, with B_q the unit ball of C^{q-1}.

    Pass ``sphere_degree=0`` when the integrand depends on eta only through
    its norm; the angular part of the ball then collapses to its total mass.
    """
    if int(q) != q or q < 2:
        raise ParameterError(f"cylinder needs q >= 2, got {q}")
    q = int(q)
    degree = int(degree)
    ball = ball_rule(q - 1, degree, sphere_degree, n_radial)
    ph, wt = _circle(n_theta or degree + 1)
    m = len(ball)
    nodes = np.empty((len(ph) * m, q), dtype=complex)
    nodes[:, : q - 1] = np.tile(ball.nodes, (len(ph), 1))
    nodes[:, q - 1] = np.repeat(ph, m)
    weights = (wt[:, None] * ball.weights[None, :]).ravel()
    return QuadratureRule("cylinder", q, nodes, weights, ball.exact_degree)


def declared_mass(rule):
    """Closed-form total mass of the measure a rule targets."""
    q = rule.q
    if rule.domain == "circle":
        return 2 * math.pi
    if rule.domain == "disk_nu":
        return 1.0
    if rule.domain == "sphere":
        return sphere_area(q)
    if rule.domain == "ball":
        return ball_volume(q)
    if rule.domain == "cylinder":
        return 2 * math.pi * ball_volume(q - 1)
    return rule.meta["mass"]


def frame_from_pole(w):
    """Unitary U with U e_q = w, from one complex Householder reflection.

    With phi the argument of w_q, the reflection H = I - 2 v v^H / |v|^2,
    v = e_q - e^{-i phi} w, maps e_q to e^{-i phi} w; U = e^{i phi} H.
    """
    w = np.asarray(w, dtype=complex).ravel()
    norm = np.linalg.norm(w)
    if abs(norm - 1) > 1e-10:
        raise DomainError(f"pole must lie on the unit sphere, |w| = {norm!r}")
    q = len(w)
    wq = w[-1]
    phase = wq / abs(wq) if abs(wq) > 0 else 1.0 + 0j
    e = np.zeros(q, dtype=complex)
    e[-1] = 1
    v = e - np.conj(phase) * w
    vv = np.vdot(v, v).real
    h = np.eye(q, dtype=complex)
    if vv > 1e-30:
        h -= 2 * np.outer(v, np.conj(v)) / vv
    u = phase * h
    u.setflags(write=False)
    return UnitaryFrame(u, w.copy())


def cylinder_points(rule, frame=None):
    """Sphere points U (eta, e^{i theta} sqrt(1 - |eta|^2)) for a cylinder rule."""
    if rule.domain != "cylinder":
        raise ParameterError(f"expected a cylinder rule, got {rule.domain!r}")
    q = rule.q
    eta = rule.nodes[:, : q - 1]
    r = np.sqrt(np.sum(eta.real ** 2 + eta.imag ** 2, axis=1))
    rho = np.sqrt(np.maximum((1 - r) * (1 + r), 0.0))
    local = np.array(rule.nodes)
    local[:, q - 1] = rule.nodes[:, q - 1] * rho
    if frame is None:
        return local
    if frame.q != q:
        raise ParameterError(f"frame dimension {frame.q} does not match q={q}")
    return frame.apply(local)


def weighted_sum(values, weights):
    """Correctly rounded sum of w_i * v_i (fixed order, reproducible)."""
    prod = np.asarray(weights) * np.asarray(values)
    if np.iscomplexobj(prod):
        return complex(math.fsum(prod.real), math.fsum(prod.imag))
    return complex(math.fsum(prod), 0.0)


def integrate(f, rule, points=None):
    """Integrate a vectorized `f` against `rule`.

    `points` overrides the array handed to `f` (used for cylinder rules mapped
    onto the sphere); by default `f` sees ``rule.nodes``.
    """
    pts = rule.nodes if points is None else points
    values = np.asarray(f(pts))
    if values.ndim == 0:
        values = np.full(len(rule), values[()])
    if values.shape != (len(rule),):
        raise ParameterError(f"integrand returned shape {values.shape}, expected ({len(rule)},)")
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = int(np.flatnonzero(bad)[0])
        raise EvaluationError(f"non-finite integrand value at node {idx}", node_index=idx)
    return weighted_sum(values, rule.weights)


def cylinder_integral(f, q, degree, pole=None, **kw):
    """Integral of f(eta + e^{i theta} sqrt(1-|eta|^2) w) over the cylinder.

    With ``pole=None`` the pole is e_q, i.e. f(eta, e^{i theta} sqrt(1-|eta|^2)).
    """
    rule = cylinder_rule(q, degree, **kw)
    frame = None if pole is None else frame_from_pole(pole)
    return integrate(f, rule, cylinder_points(rule, frame))


def pole_invariance_residual(f, w1, w2, q, degree):
    """|I(w1) - I(w2)| for the cylinder integral about two different poles."""
    rule = cylinder_rule(q, degree)
    i1 = integrate(f, rule, cylinder_points(rule, frame_from_pole(w1)))
    i2 = integrate(f, rule, cylinder_points(rule, frame_from_pole(w2)))
    return abs(i1 - i2)
