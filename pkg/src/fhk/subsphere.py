"""Subspheres {z in Omega_2q : <z, w> = gamma} of the unit sphere of C^q:
point decomposition, surface measure, quadrature, the subsphere Funk-Hecke
identity and the mean-value property of spherical harmonics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DomainError, ParameterError
from .funk_hecke import _resolve, bidegree_of
from .harmonics import poly_eval
from .quadrature import QuadratureRule, UnitaryFrame, frame_from_pole, sphere_rule, weighted_sum
from .special_poly import disk_poly, sphere_area

GAMMA_TOL = 1e-12


def _radius_power(gamma, q):
    """(1 - |gamma|^2)^{(2q-3)/2}, via log1p for |gamma| near 1."""
    g2 = abs(gamma) ** 2
    if g2 >= 1:
        return 0.0
    return math.exp((q - 1.5) * math.log1p(-g2))


@dataclass(frozen=True, eq=False)
class SubsphereSpec:
    pole: np.ndarray
    gamma: complex
    q: int

    def __post_init__(self):
        w = np.asarray(self.pole, dtype=complex).ravel()
        if int(self.q) != self.q or self.q < 2:
            raise ParameterError(f"subspheres need q >= 2, got {self.q}")
        if len(w) != self.q:
            raise ParameterError(f"pole has {len(w)} coordinates, expected {self.q}")
        if abs(np.linalg.norm(w) - 1) > 1e-10:
            raise DomainError("pole must lie on the unit sphere")
        if abs(self.gamma) > 1 + GAMMA_TOL:
            raise DomainError(f"|gamma| = {abs(self.gamma)} exceeds 1")
        object.__setattr__(self, "pole", w)
        object.__setattr__(self, "gamma", complex(self.gamma))

    @classmethod
    def of(cls, pole, gamma):
        pole = np.asarray(pole, dtype=complex).ravel()
        return cls(pole, gamma, len(pole))

    @property
    def degenerate(self):
        return abs(self.gamma) >= 1 - GAMMA_TOL

    @property
    def radius(self):
        g = abs(self.gamma)
        return math.sqrt(max((1 - g) * (1 + g), 0.0))


def subsphere_measure(spec):
    """sigma_w^gamma(Omega_w^gamma) = 2 pi^{q-1} / (q-2)! * (1 - |gamma|^2)^{(2q-3)/2}."""
    return sphere_area(spec.q - 1) * _radius_power(spec.gamma, spec.q)


def subsphere_rule(spec, degree, frame=None):
    """Nodes gamma w + sqrt(1-|gamma|^2) U (z'', 0) with z'' from the sphere rule of C^{q-1}.

    `frame` overrides the unitary U (it must send e_q to the pole).
    """
    if spec.degenerate:
        raise DegeneracyError("the subsphere with |gamma| = 1 is a single point")
    q = spec.q
    u = frame if frame is not None else frame_from_pole(spec.pole)
    inner = sphere_rule(q - 1, degree)
    local = np.zeros((len(inner), q), dtype=complex)
    local[:, : q - 1] = spec.radius * inner.nodes
    nodes = spec.gamma * spec.pole[None, :] + u.apply(local)
    weights = inner.weights * _radius_power(spec.gamma, q)
    return QuadratureRule("subsphere", q, nodes, weights, inner.exact_degree,
                          {"mass": subsphere_measure(spec), "gamma": spec.gamma})


def gauge_frame(spec, v):
    """The frame U (V (+) 1) for a unitary V of C^{q-1}; same pole, rotated hyperplane."""
    u = frame_from_pole(spec.pole).matrix
    block = np.eye(spec.q, dtype=complex)
    block[: spec.q - 1, : spec.q - 1] = v
    return UnitaryFrame(u @ block, spec.pole)


@dataclass(frozen=True)
class Decomposition:
    inner: complex
    zprime: np.ndarray


def decompose_point(z, spec):
    """Write z = (t e^{i theta} - gamma s/rho) w + (s/rho) z' with z' on the subsphere,
    t e^{i theta} = <z, w>, s = sqrt(1-t^2), rho = sqrt(1-|gamma|^2).

    The decomposition is not unique; when z is a unit multiple of w, z' is the
    first node of the subsphere rule.
    """
    if spec.degenerate:
        raise DegeneracyError("decomposition needs |gamma| != 1")
    z = np.asarray(z, dtype=complex).ravel()
    if abs(np.linalg.norm(z) - 1) > 1e-10:
        raise DomainError("z must lie on the unit sphere")
    w = spec.pole
    inner = complex(np.vdot(w, z))
    t = abs(inner)
    s = math.sqrt(max((1 - t) * (1 + t), 0.0))
    if s < 1e-12:
        zprime = subsphere_rule(spec, 0).nodes[0].copy()
    else:
        direction = (z - inner * w) / s
        zprime = spec.gamma * w + spec.radius * direction
    return Decomposition(inner, zprime)


def reconstruct(dec, spec):
    t = abs(dec.inner)
    s = math.sqrt(max((1 - t) * (1 + t), 0.0))
    ratio = s / spec.radius
    return (dec.inner - spec.gamma * ratio) * spec.pole + ratio * dec.zprime


def upsilon(kernel, m, n, q, gamma):
    """omega_{q-1} (1-|gamma|^2)^{(2q-3)/2} K(gamma) conj(R_{m,n}^{q-2}(gamma)); 0 on |gamma| = 1."""
    gamma = complex(gamma)
    if abs(gamma) > 1 + GAMMA_TOL:
        raise DomainError(f"|gamma| = {abs(gamma)} exceeds 1")
    pref = sphere_area(q - 1) * _radius_power(gamma, q)
    if pref == 0.0:
        return 0j
    fn, _, _ = _resolve(kernel, q)
    k = complex(np.asarray(fn(np.array([gamma])))[0])
    return pref * k * np.conj(disk_poly(m, n, q, gamma))


@dataclass(frozen=True)
class SubsphereCheck:
    integral: complex
    predicted: complex

    @property
    def residual(self):
        return abs(self.integral - self.predicted)


def subsphere_funk_hecke(kernel, Y, spec, degree=None, frame=None):
    """int over the subsphere of K(<z, w>) conj(Y(z)), next to Upsilon conj(Y(w))."""
    m, n = bidegree_of(Y) if Y.terms else (0, 0)
    rule = subsphere_rule(spec, degree if degree is not None else m + n, frame)
    fn, _, _ = _resolve(kernel, spec.q)
    z = rule.nodes
    vals = fn(z @ np.conj(spec.pole)) * np.conj(poly_eval(Y, z))
    lhs = weighted_sum(vals, rule.weights)
    rhs = upsilon(kernel, m, n, spec.q, spec.gamma) * np.conj(poly_eval(Y, spec.pole))
    return SubsphereCheck(lhs, rhs)


def subsphere_funk_hecke_residual(kernel, Y, spec, degree=None):
    return subsphere_funk_hecke(kernel, Y, spec, degree).residual


def mean_value(Y, spec, degree=None):
    """int over the subsphere of Y, next to sigma_w^gamma(Omega_w^gamma) R_{m,n}(gamma) Y(w)."""
    m, n = bidegree_of(Y) if Y.terms else (0, 0)
    rule = subsphere_rule(spec, degree if degree is not None else m + n)
    integral = weighted_sum(poly_eval(Y, rule.nodes), rule.weights)
    predicted = subsphere_measure(spec) * disk_poly(m, n, spec.q, spec.gamma) * poly_eval(Y, spec.pole)
    return SubsphereCheck(integral, predicted)
