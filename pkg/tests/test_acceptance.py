"""The twelve acceptance criteria, each at its stated tolerance.

Every test records one pass/fail line, printed in the pytest terminal summary.
Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest
import sympy as sp
from sympy.polys.matrices import DomainMatrix

from conftest import random_sphere, record
from fhk import funk_hecke as fh
from fhk.funk_hecke import KernelSpec, builtin_kernels
from fhk.harmonics import addition_formula_residual, harmonic_basis, laplacian_matrix, nullspace
from fhk.quadrature import (ball_rule, cylinder_integral, cylinder_rule, disk_rule_nu, integrate,
                            sphere_rule)
from fhk.special_poly import (ball_volume, disk_poly, harmonic_dim, ortho_constant, sphere_area)
from fhk.subsphere import (SubsphereSpec, mean_value, subsphere_funk_hecke, subsphere_measure,
                           subsphere_rule, upsilon)
from fhk.suites import TRANSCENDENTAL_DEGREE, test_functions as battery, identity_poles

QS = (2, 3, 4)


def rel(a, b):
    return abs(a - b) / (1 + abs(b))


def test_c01_disk_polynomial_laws():
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for q in (2, 3, 4, 5):
        for m in range(9):
            for n in range(9):
                z = np.sqrt(rng.random(10_000)) * np.exp(2j * np.pi * rng.random(10_000))
                theta = 2 * np.pi * rng.random(10_000)
                r = disk_poly(m, n, q, z)
                equiv = np.abs(disk_poly(m, n, q, np.exp(1j * theta) * z) - np.exp(1j * (m - n) * theta) * r)
                bound = np.maximum(np.abs(r) - 1, 0)
                conj = np.maximum(np.abs(disk_poly(m, n, q, np.conj(z)) - np.conj(r)),
                                  np.abs(disk_poly(n, m, q, z) - np.conj(r)))
                worst = max(worst, equiv.max(), bound.max(), conj.max())
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 10
    record(1, "disk polynomial laws", ok, f"max residual {worst:.2e}, {elapsed:.1f} s")
    assert worst < 1e-12
    assert elapsed < 10


def test_c02_measure_masses():
    worst = 0.0
    for q in QS:
        pairs = [
            (disk_rule_nu(q, 4, 9).measure_mass, 1.0),
            (sphere_rule(q, 6).measure_mass, 2 * math.pi ** q / math.factorial(q - 1)),
            (ball_rule(q, 6).measure_mass, math.pi ** q / math.factorial(q)),
            (cylinder_rule(q, 6).measure_mass, 2 * math.pi ** q / math.factorial(q - 1)),
        ]
        worst = max(worst, *(abs(a - b) / b for a, b in pairs))
    record(2, "measure masses", worst < 1e-12, f"max relative error {worst:.2e}")
    assert worst < 1e-12


def test_c03_sphere_cylinder_identity():
    start = time.perf_counter()
    worst, count = 0.0, 0
    for q in QS:
        funcs = battery(q)
        assert len(funcs) == 25
        for _, f, deg in funcs:
            d = deg if deg is not None else TRANSCENDENTAL_DEGREE[q]
            sphere = integrate(f, sphere_rule(q, d))
            for pname, w in identity_poles(q):
                pole = None if pname == "e_q" else w
                worst = max(worst, rel(cylinder_integral(f, q, d, pole=pole), sphere))
                count += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 60
    record(3, "sphere/cylinder identity", ok, f"{count} cases, max rel residual {worst:.2e}, {elapsed:.1f} s")
    assert count == 225
    assert worst < 1e-8
    assert elapsed < 60


def test_c04_eigenvalue_routes():
    worst = 0.0
    for q in QS:
        for k in builtin_kernels():
            for m in range(5):
                for n in range(5):
                    lam = fh.eigenvalue_disk(k, m, n, q).value
                    big = fh.eigenvalue_cylinder(k, m, n, q).value
                    worst = max(worst, rel(big, lam))
    record(4, "eigenvalue route equivalence", worst <= 1e-8, f"max |l-L|/(1+|l|) {worst:.2e}")
    assert worst <= 1e-8


def test_c05_diagonal_spectrum():
    worst = 0.0
    for q in QS:
        for kk in range(5):
            for ll in range(5):
                kernel = KernelSpec.disk(kk, ll)
                for m in range(5):
                    for n in range(5):
                        expected = sphere_area(q) / harmonic_dim(m, n, q) if (kk, ll) == (m, n) else 0.0
                        for route in (fh.eigenvalue_disk, fh.eigenvalue_cylinder):
                            worst = max(worst, rel(route(kernel, m, n, q).value, expected))
    record(5, "diagonal spectrum", worst < 1e-8, f"max rel residual {worst:.2e}")
    assert worst < 1e-8


def test_c06_funk_hecke_eigenfunctions():
    start = time.perf_counter()
    q = 2
    poles = random_sphere(np.random.default_rng(6), 10, q)
    worst, count = 0.0, 0
    for m in range(4):
        for n in range(4):
            for y in harmonic_basis(m, n, q).elements:
                for k in builtin_kernels():
                    for variant in fh.VARIANTS:
                        for w in poles:
                            direct = fh.apply_funk_hecke(k, y, w, variant)
                            predicted = fh.predicted_funk_hecke(k, y, w, variant)
                            mm, nn = (m, n) if variant in ("KzwYbar", "KwzY") else (n, m)
                            lam = fh.eigenvalue_cylinder(k, mm, nn, q).value
                            worst = max(worst, abs(direct - predicted) / (1 + abs(lam)))
                            count += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 300
    record(6, "Funk-Hecke eigenfunctions on the sphere of C^2", ok,
           f"{count} checks, max residual/(1+|L|) {worst:.2e}, {elapsed:.1f} s")
    assert count == 64 * 5 * 4 * 10
    assert worst <= 1e-6
    assert elapsed < 300


def test_c07_addition_formula():
    worst = 0.0
    for q in (2, 3):
        rng = np.random.default_rng(70 + q)
        for m in range(4):
            for n in range(4):
                basis = harmonic_basis(m, n, q)
                z, w = random_sphere(rng, 100, q), random_sphere(rng, 100, q)
                worst = max(worst, np.max(addition_formula_residual(basis, z, w)),
                            np.max(addition_formula_residual(basis, z, z)))
    record(7, "addition formula", worst < 1e-8, f"max residual {worst:.2e}")
    assert worst < 1e-8


def test_c08_cylinder_orthogonality():
    worst = 0.0
    for q in (2, 3):
        for mu in range(4):
            for nu in range(4):
                for m in range(4):
                    for n in range(4):
                        chk = fh.cylinder_orthogonality_check(mu, nu, m, n, q)
                        expected = ortho_constant(m, n, q) if (mu, nu) == (m, n) else 0.0
                        worst = max(worst, rel(chk.value, expected))
    record(8, "cylinder orthogonality", worst < 1e-8, f"max rel residual {worst:.2e}")
    assert worst < 1e-8


def test_c09_bizonal_and_ball_identities():
    worst = 0.0
    rng = np.random.default_rng(9)
    for q in QS:
        pole = random_sphere(rng, 1, q)[0]
        # cylinder integral about e_q and about an arbitrary pole
        for _, f, deg in battery(q)[:6]:
            sphere = integrate(f, sphere_rule(q, deg))
            worst = max(worst, rel(cylinder_integral(f, q, deg), sphere),
                        rel(cylinder_integral(f, q, deg, pole=pole), sphere))
        for k in builtin_kernels():
            ref = fh.bizonal_sphere_integral(k, q, "sphere", pole=pole)
            for method in ("sphere", "disk", "cylinder", "radial"):
                worst = max(worst, rel(fh.bizonal_sphere_integral(k, q, method), ref))
            w = 0.6 * random_sphere(rng, 1, q)[0]
            deg = k.degree if k.degree is not None else {2: 20, 3: 14, 4: 10}[q]
            res = fh.ball_zonal_integral(k, w, q, degree=deg)
            worst = max(worst, rel(res.lhs, res.rhs))
        radial = fh.ball_radial_integral(lambda r: r ** 3, q)
        worst = max(worst, rel(radial.lhs, sphere_area(q) / (2 * q + 3)), rel(radial.rhs, radial.lhs))
    worst = max(worst, rel(fh.ball_zonal_integral(KernelSpec.constant(1), np.zeros(2), 2, degree=0).lhs,
                           ball_volume(2)))
    record(9, "bizonal and ball identities", worst < 1e-8, f"max rel residual {worst:.2e}")
    assert worst < 1e-8


def test_c10_subsphere_suite():
    q = 2
    rng = np.random.default_rng(10)
    poles = random_sphere(rng, 3, q)
    geom, mass, ident, mean = 0.0, 0.0, 0.0, 0.0
    for gamma in (0.0, 0.3, 0.6 + 0.2j, 0.9):
        for w in poles:
            spec = SubsphereSpec.of(w, gamma)
            nodes = subsphere_rule(spec, 6).nodes
            geom = max(geom, np.max(np.abs(np.linalg.norm(nodes, axis=1) - 1)),
                       np.max(np.abs(nodes @ np.conj(w) - gamma)))
            mass = max(mass, abs(subsphere_rule(spec, 6).measure_mass - subsphere_measure(spec))
                       / subsphere_measure(spec))
            for m in range(4):
                for n in range(4):
                    for y in harmonic_basis(m, n, q).elements:
                        for k in builtin_kernels():
                            ident = max(ident, subsphere_funk_hecke(k, y, spec).residual)
                        mv = mean_value(y, spec)
                        mean = max(mean, mv.residual)
    degenerate = all(upsilon(k, m, n, q, g) == 0 for k in builtin_kernels()
                     for m, n in [(0, 0), (2, 1)] for g in (1.0, -1.0, 1j, np.exp(0.3j)))
    ok = geom < 1e-12 and mass < 1e-12 and ident <= 1e-7 and mean <= 1e-7 and degenerate
    record(10, "subsphere suite", ok,
           f"membership {geom:.1e}, mass {mass:.1e}, Funk-Hecke {ident:.1e}, mean value {mean:.1e}")
    assert geom < 1e-12 and mass < 1e-12
    assert ident <= 1e-7 and mean <= 1e-7
    assert degenerate


def test_c11_laplacian_nullspace_dimension():
    mismatches = []
    for q in (2, 3):
        for m in range(5):
            for n in range(5):
                mat, cols = laplacian_matrix(m, n, q)
                numeric = nullspace(mat, len(cols)).shape[1]
                if mat.shape[0]:
                    exact = DomainMatrix.from_Matrix(sp.Matrix(mat.astype(int).tolist())).convert_to(sp.QQ)
                    exact_dim = len(cols) - exact.rank()
                else:
                    exact_dim = len(cols)
                if not (numeric == exact_dim == harmonic_dim(m, n, q)):
                    mismatches.append((m, n, q, numeric, exact_dim))
    record(11, "Laplacian nullspace dimension", not mismatches, f"{len(mismatches)} mismatches")
    assert not mismatches


def test_c12_determinism(tmp_path):
    outputs = []
    for i, threads in enumerate(("1", "1", "4")):
        out = tmp_path / f"all{i}.json"
        env = dict(os.environ, FHK_THREADS=threads)
        res = subprocess.run([sys.executable, "-m", "fhk", "verify", "--suite", "all", "--q", "2",
                              "--out", str(out)], env=env, capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        outputs.append(out.read_bytes())
    same = outputs[0] == outputs[1] == outputs[2]
    record(12, "deterministic verify --suite all --q 2", same,
           f"{len(outputs[0])} bytes, threads 1/1/4")
    assert same
