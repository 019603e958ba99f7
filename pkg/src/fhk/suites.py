"""Identity-verification suites behind ``fhk verify``.

Each suite expands to an ordered list of checks. A check is a label, a thunk
returning ``(value, expected)`` and the tolerance key it is judged by. Checks
are pure, so they may be evaluated on a thread pool; rows keep list order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.stats import qmc

from . import funk_hecke as fh
from .harmonics import harmonic_basis
from .harmonics import addition_formula_residual
from .quadrature import (ball_rule, cylinder_integral, cylinder_rule, disk_rule_nu,
                         integrate, sphere_rule)
from .special_poly import ball_volume, disk_poly, harmonic_dim, ortho_fraction, sphere_area
from .subsphere import (SubsphereSpec, decompose_point, mean_value, reconstruct,
                        subsphere_funk_hecke, subsphere_measure, subsphere_rule, upsilon)

# (tolerance, mode); "rel" rows are judged by |value - expected| / (1 + |expected|)
TOLERANCES = {
    "disk_laws": (1e-12, "abs"),
    "mass": (1e-12, "rel"),
    "addition": (1e-8, "abs"),
    "cylinder_identity": (1e-8, "rel"),
    "routes": (1e-8, "rel"),
    "diagonal": (1e-8, "rel"),
    "duality": (1e-10, "abs"),
    "real_cross": (1e-8, "rel"),
    "eigenfunction": (1e-6, "rel"),
    "orthogonality": (1e-8, "rel"),
    "exact": (0.0, "abs"),
    "bizonal": (1e-8, "rel"),
    "ball": (1e-8, "rel"),
    "subsphere_geometry": (1e-12, "abs"),
    "subsphere_mass": (1e-12, "rel"),
    "subsphere_identity": (1e-7, "abs"),
}

SUITES = ("lemma21", "addition", "theorem24", "funkhecke", "orthogonality",
          "prop42", "prop43", "subsphere")

TRANSCENDENTAL_DEGREE = fh.DIRECT_SPHERE_DEGREE


@dataclass(frozen=True)
class Check:
    label: str
    thunk: Callable
    tol_key: str


@dataclass(frozen=True)
class Row:
    label: str
    value: complex
    expected: complex
    residual: float
    tolerance: float
    mode: str
    passed: bool


def run_check(check):
    value, expected = check.thunk()
    tol, mode = TOLERANCES[check.tol_key]
    value, expected = complex(value), complex(expected)
    residual = abs(value - expected)
    if mode == "rel":
        residual /= 1 + abs(expected)
    return Row(check.label, value, expected, float(residual), tol, mode, residual <= tol)


def worker_count():
    try:
        return max(1, int(os.environ.get("FHK_THREADS", "1")))
    except ValueError:
        return 1


def run_checks(checks, workers=None):
    workers = workers or worker_count()
    if workers == 1:
        return [run_check(c) for c in checks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_check, checks))


def unit_vectors(rng, count, q):
    v = rng.normal(size=(count, q)) + 1j * rng.normal(size=(count, q))
    return v / np.linalg.norm(v, axis=1)[:, None]


def basis_vector(q, j):
    e = np.zeros(q, dtype=complex)
    e[j] = 1
    return e


def disk_samples(count, seed=0):
    """Halton points mapped to the closed unit disk (area-uniform)."""
    u = qmc.Halton(d=2, scramble=False).random(count + 1)[1:]
    u = u if seed == 0 else (u + np.random.default_rng(seed).random(2)) % 1.0
    return np.sqrt(u[:, 0]) * np.exp(2j * np.pi * u[:, 1])


def _grid(top):
    return [(m, n) for m in range(top + 1) for n in range(top + 1)]


# -- disk polynomial laws ------------------------------------------------------

def disk_law_residuals(m, n, q, z, theta):
    """Largest violations of rotation equivariance, boundedness and conjugation symmetry."""
    r = disk_poly(m, n, q, z)
    rot = disk_poly(m, n, q, np.exp(1j * theta) * z)
    equiv = np.max(np.abs(rot - np.exp(1j * (m - n) * theta) * r))
    bound = max(float(np.max(np.abs(r))) - 1.0, 0.0)
    conj1 = np.max(np.abs(disk_poly(m, n, q, np.conj(z)) - np.conj(r)))
    conj2 = np.max(np.abs(disk_poly(n, m, q, z) - np.conj(r)))
    return float(equiv), bound, float(max(conj1, conj2))


def disk_law_checks(q, top, samples=2000):
    z = disk_samples(samples)
    theta = 2 * np.pi * qmc.Halton(d=1, scramble=False).random(samples + 1)[1:, 0]
    checks = []
    for m, n in _grid(top):
        res = {}

        def get(i, m=m, n=n, res=res):
            if not res:
                res["v"] = disk_law_residuals(m, n, q, z, theta)
            return res["v"][i], 0.0

        for i, name in enumerate(("equivariance", "bound", "conjugation")):
            checks.append(Check(f"disk law {name} m={m} n={n} q={q}", lambda i=i, get=get: get(i), "disk_laws"))
        checks.append(Check(f"disk law normalization m={m} n={n} q={q}",
                            lambda m=m, n=n: (disk_poly(m, n, q, 1.0), 1.0), "disk_laws"))
    return checks


# -- masses and addition formula ----------------------------------------------

def mass_checks(q, top):
    out = [Check("mass circle", lambda: (sphere_rule(1, top).measure_mass, 2 * math.pi), "mass"),
           Check(f"mass nu_{q}", lambda: (disk_rule_nu(q, 3, 5).measure_mass, 1.0), "mass"),
           Check(f"mass sphere q={q}", lambda: (sphere_rule(q, top).measure_mass, sphere_area(q)), "mass"),
           Check(f"mass ball q={q}", lambda: (ball_rule(q, top).measure_mass, ball_volume(q)), "mass"),
           Check(f"mass cylinder q={q}",
                 lambda: (cylinder_rule(q, top).measure_mass, 2 * math.pi ** q / math.factorial(q - 1)), "mass")]
    return out


def addition_checks(q, top, pairs=100):
    checks = []
    for m, n in _grid(top):
        def thunk(m=m, n=n):
            basis = harmonic_basis(m, n, q)
            rng = np.random.default_rng([q, m, n])
            z, w = unit_vectors(rng, pairs, q), unit_vectors(rng, pairs, q)
            worst = max(np.max(addition_formula_residual(basis, z, w)),
                        np.max(addition_formula_residual(basis, z, z)))
            return float(worst), 0.0
        checks.append(Check(f"addition m={m} n={n} q={q}", thunk, "addition"))
    return checks


# -- sphere / cylinder identity -----------------------------------------------

def test_functions(q):
    """(label, f, degree) battery: 20 polynomials and 5 non-polynomial functions.
    degree None marks a non-polynomial integrand."""
    rng = np.random.default_rng(2024 + q)
    z = lambda p, j: p[:, j % q]
    fs = [
        ("1", lambda p: np.ones(len(p), complex), 0),
        ("|z1|^2", lambda p: np.abs(z(p, 0)) ** 2, 2),
        ("|zq|^2", lambda p: np.abs(z(p, -1)) ** 2, 2),
        ("|z1|^4", lambda p: np.abs(z(p, 0)) ** 4, 4),
        ("|zq|^6", lambda p: np.abs(z(p, -1)) ** 6, 6),
        ("|z1 z2|^2", lambda p: np.abs(z(p, 0) * z(p, 1)) ** 2, 4),
        ("z1 conj(z2)", lambda p: z(p, 0) * np.conj(z(p, 1)), 2),
        ("z1^2", lambda p: z(p, 0) ** 2, 2),
        ("|z1|^2 |zq|^4", lambda p: np.abs(z(p, 0)) ** 2 * np.abs(z(p, -1)) ** 4, 6),
        ("Re(z1)^4", lambda p: z(p, 0).real ** 4, 4),
        ("Im(zq)^2 Re(z1)^2", lambda p: z(p, -1).imag ** 2 * z(p, 0).real ** 2, 4),
        ("|z1+zq|^4", lambda p: np.abs(z(p, 0) + z(p, -1)) ** 4, 4),
        ("(z1 conj zq)^2", lambda p: (z(p, 0) * np.conj(z(p, -1))) ** 2, 4),
        ("|z1|^8", lambda p: np.abs(z(p, 0)) ** 8, 8),
        ("Re(z1 z2 conj(z1 z2))^2", lambda p: np.abs(z(p, 0) * z(p, 1)) ** 4, 8),
    ]
    for k in range(5):
        a = rng.normal(size=(q, q)) + 1j * rng.normal(size=(q, q))
        deg = 2 + 2 * (k % 3)

        def f(p, a=a, deg=deg):
            v = np.einsum("ij,ni,nj->n", a, p, np.conj(p))
            return v ** (deg // 2) + p[:, 0]
        fs.append((f"random form {k} deg {deg}", f, deg))
    fs += [
        ("exp(Re z1 / 2)", lambda p: np.exp(z(p, 0).real / 2), None),
        ("cos(|zq|^2 / 2)", lambda p: np.cos(np.abs(z(p, -1)) ** 2 / 2), None),
        ("exp(i Im(z1 conj zq) / 2)", lambda p: np.exp(0.5j * (z(p, 0) * np.conj(z(p, -1))).imag), None),
        ("1 + sin(Re(z1 + zq) / 2)", lambda p: 1 + np.sin((z(p, 0) + z(p, -1)).real / 2), None),
        ("exp((z1 + conj z2) / 3)", lambda p: np.exp((z(p, 0) + np.conj(z(p, 1))) / 3), None),
    ]
    return fs


def identity_poles(q):
    rng = np.random.default_rng(77 + q)
    return [("e_q", basis_vector(q, q - 1)), ("e_1", basis_vector(q, 0)),
            ("random", unit_vectors(rng, 1, q)[0])]


def cylinder_identity_checks(q, top=None):
    checks = []
    for label, f, deg in test_functions(q):
        d = deg if deg is not None else TRANSCENDENTAL_DEGREE.get(q, 12)
        cache = {}

        def sphere_value(f=f, d=d, cache=cache):
            if "v" not in cache:
                cache["v"] = integrate(f, sphere_rule(q, d))
            return cache["v"]

        for pname, w in identity_poles(q):
            pole = None if pname == "e_q" else w
            checks.append(Check(
                f"sphere vs cylinder q={q} f={label} pole={pname}",
                lambda f=f, d=d, pole=pole, sv=sphere_value: (cylinder_integral(f, q, d, pole=pole), sv()),
                "cylinder_identity"))
    return checks


# -- Funk-Hecke eigenvalues --------------------------------------------------

def funkhecke_checks(q, top):
    checks = []
    kernels = fh.builtin_kernels()
    for k in kernels:
        for m, n in _grid(top):
            checks.append(Check(
                f"routes K={k.token} m={m} n={n} q={q}",
                lambda k=k, m=m, n=n: (fh.eigenvalue_cylinder(k, m, n, q).value,
                                       fh.eigenvalue_disk(k, m, n, q).value), "routes"))
    for kk, ll in _grid(top):
        for m, n in _grid(top):
            expected = sphere_area(q) / harmonic_dim(m, n, q) if (kk, ll) == (m, n) else 0.0
            checks.append(Check(
                f"diagonal R_{kk},{ll} m={m} n={n} q={q}",
                lambda kk=kk, ll=ll, m=m, n=n, e=expected: (
                    fh.eigenvalue_disk(fh.KernelSpec.disk(kk, ll), m, n, q).value, e), "diagonal"))
    for k in kernels:
        for m, n in _grid(top):
            def dual(k=k, m=m, n=n):
                fn = k.bind(q)
                lhs = fh.eigenvalue_cylinder(lambda z: np.conj(fn(z)), m, n, q, degree=k.degree).value
                return lhs, np.conj(fh.eigenvalue_cylinder(k, n, m, q).value)
            checks.append(Check(f"duality K={k.token} m={m} n={n} q={q}", dual, "duality"))
    for m, n in _grid(top):
        checks.append(Check(
            f"real cross-check exp m={m} n={n} q={q}",
            lambda m=m, n=n: (fh.eigenvalue_disk(fh.KernelSpec.exp_re(), m, n, q).value,
                              fh.real_funk_hecke_eigenvalue(np.exp, m + n, 2 * q)), "real_cross"))
    rng = np.random.default_rng(300 + q)
    poles = unit_vectors(rng, 2 if q == 2 else 1, q)
    for m, n in _grid(min(top, 3)):
        basis = harmonic_basis(m, n, q)
        elements = basis.elements if q == 2 else basis.elements[:1]
        for j, y in enumerate(elements):
            for k in kernels:
                for variant in fh.VARIANTS:
                    for pi, w in enumerate(poles):
                        checks.append(Check(
                            f"eigenfunction K={k.token} Y={m},{n}#{j} {variant} pole{pi} q={q}",
                            lambda k=k, y=y, v=variant, w=w: (
                                fh.apply_funk_hecke(k, y, w, v),
                                fh.predicted_funk_hecke(k, y, w, v)), "eigenfunction"))
    return checks


# -- cylinder orthogonality ---------------------------------------------------

def orthogonality_checks(q, top):
    checks = []
    for mu, nu in _grid(top):
        for m, n in _grid(top):
            checks.append(Check(
                f"cylinder ortho ({mu},{nu})x({m},{n}) q={q}",
                lambda mu=mu, nu=nu, m=m, n=n: _ortho(mu, nu, m, n, q, False), "orthogonality"))
            if mu - nu == m - n:
                checks.append(Check(
                    f"reduced ortho ({mu},{nu})x({m},{n}) q={q}",
                    lambda mu=mu, nu=nu, m=m, n=n: _ortho(mu, nu, m, n, q, True), "orthogonality"))
    for m, n in _grid(top):
        def exact(m=m, n=n):
            # c(m,n,q) d(m,n) = omega_q, compared as exact rationals times pi^q
            lhs = ortho_fraction(m, n, q) * harmonic_dim(m, n, q)
            return float(lhs - Fraction(2, math.factorial(q - 1))), 0.0
        checks.append(Check(f"c*d = omega m={m} n={n} q={q}", exact, "exact"))
    return checks


def _ortho(mu, nu, m, n, q, reduced):
    res = fh.cylinder_orthogonality_check(mu, nu, m, n, q)
    if reduced:
        return res.reduced, res.reduced_expected
    return res.value, res.expected


# -- propositions on bizonal and ball integrals -------------------------------

def bizonal_checks(q, top=None):
    checks = []
    for k in fh.builtin_kernels():
        for method in ("disk", "cylinder", "radial"):
            checks.append(Check(
                f"bizonal K={k.token} {method} vs sphere q={q}",
                lambda k=k, meth=method: (fh.bizonal_sphere_integral(k, q, meth),
                                          fh.bizonal_sphere_integral(k, q, "sphere")), "bizonal"))
    return checks


BALL_DEGREE = {1: 30, 2: 20, 3: 14, 4: 10}


def ball_checks(q, top=None):
    checks = []
    rng = np.random.default_rng(500 + q)
    w = 0.6 * unit_vectors(rng, 1, q)[0]
    for k in fh.builtin_kernels():
        deg = k.degree if k.degree is not None else BALL_DEGREE.get(q, 10)

        def thunk(k=k, deg=deg):
            res = fh.ball_zonal_integral(k, w, q, degree=deg)
            return res.lhs, res.rhs
        checks.append(Check(f"ball K={k.token} q={q}", thunk, "ball"))
    checks.append(Check(f"ball K=1 volume q={q}",
                        lambda: (fh.ball_zonal_integral(fh.KernelSpec.constant(1), w, q, degree=0).lhs,
                                 ball_volume(q)), "ball"))
    checks.append(Check(f"ball radial K(r)=r q={q}",
                        lambda: (fh.ball_radial_integral(lambda r: r, q).lhs,
                                 sphere_area(q) / (2 * q + 1)), "ball"))
    checks.append(Check(f"ball radial K(r)=exp(r) q={q}",
                        lambda: (fh.ball_radial_integral(np.exp, q, degree=40).lhs,
                                 fh.ball_radial_integral(np.exp, q, degree=40).rhs), "ball"))
    return checks


# -- subspheres ----------------------------------------------------------------

SUBSPHERE_GAMMAS = (0.0, 0.3, 0.6 + 0.2j, 0.9)


def subsphere_checks(q, top):
    checks = []
    rng = np.random.default_rng(900 + q)
    poles = unit_vectors(rng, 2, q)
    for g in SUBSPHERE_GAMMAS:
        for pi, w in enumerate(poles):
            spec = SubsphereSpec.of(w, g)
            tag = f"gamma={g} pole{pi} q={q}"

            def membership(spec=spec):
                nodes = subsphere_rule(spec, 4).nodes
                norm_err = np.max(np.abs(np.linalg.norm(nodes, axis=1) - 1))
                plane_err = np.max(np.abs(nodes @ np.conj(spec.pole) - spec.gamma))
                return float(max(norm_err, plane_err)), 0.0

            checks.append(Check(f"subsphere membership {tag}", membership, "subsphere_geometry"))
            checks.append(Check(f"subsphere mass {tag}",
                                lambda spec=spec: (subsphere_rule(spec, 4).measure_mass,
                                                   subsphere_measure(spec)), "subsphere_mass"))

            def recon(spec=spec):
                zs = unit_vectors(np.random.default_rng(5), 20, spec.q)
                err = max(np.max(np.abs(reconstruct(decompose_point(z, spec), spec) - z)) for z in zs)
                return float(err), 0.0

            checks.append(Check(f"subsphere decomposition {tag}", recon, "subsphere_geometry"))
            for m, n in _grid(min(top, 2)):
                y = harmonic_basis(m, n, q).elements[0]
                for k in fh.builtin_kernels():
                    checks.append(Check(
                        f"subsphere funk-hecke K={k.token} Y={m},{n} {tag}",
                        lambda k=k, y=y, spec=spec: _pair(subsphere_funk_hecke(k, y, spec)),
                        "subsphere_identity"))
                checks.append(Check(f"mean value Y={m},{n} {tag}",
                                    lambda y=y, spec=spec: _pair(mean_value(y, spec)), "subsphere_identity"))
    w = poles[0]
    checks.append(Check(f"upsilon degenerate gamma=1 q={q}",
                        lambda: (upsilon(fh.KernelSpec.exp_re(), 1, 0, q, 1.0), 0.0), "subsphere_geometry"))
    checks.append(Check(f"measure degenerate gamma=1 q={q}",
                        lambda: (subsphere_measure(SubsphereSpec.of(w, 1.0)), 0.0), "subsphere_geometry"))
    return checks


def _pair(res):
    return res.integral, res.predicted


BUILDERS = {
    "lemma21": lambda q, top: disk_law_checks(q, top) + mass_checks(q, 2 * top),
    "addition": addition_checks,
    "theorem24": cylinder_identity_checks,
    "funkhecke": funkhecke_checks,
    "orthogonality": orthogonality_checks,
    "prop42": bizonal_checks,
    "prop43": ball_checks,
    "subsphere": subsphere_checks,
}


def build_suite(name, q, top):
    names = SUITES if name == "all" else (name,)
    checks = []
    for s in names:
        checks.extend(BUILDERS[s](q, top))
    return checks
