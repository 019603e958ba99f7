import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import iv

from conftest import random_sphere
from fhk import funk_hecke as fh
from fhk.errors import ParameterError, PreconditionError
from fhk.funk_hecke import KernelSpec
from fhk.harmonics import PolyZZbar, harmonic_basis
from fhk.special_poly import ball_volume, harmonic_dim, sphere_area

R = sp.Symbol("r", nonnegative=True)


def sympy_monomial_eigenvalue(a, b, m, n, q):
    """Exact lambda_{m,n} of zeta^a conj(zeta)^b, by the radial integral in polar form."""
    if a - b != m - n:
        return 0.0
    d = abs(m - n)
    k = min(m, n)
    p = sp.jacobi_poly(k, q - 2, d, 2 * R ** 2 - 1)
    p = p / p.subs(R, 1)
    integrand = R ** (a + b + d + 1) * p * (1 - R ** 2) ** (q - 2)
    omega = 2 * sp.pi ** q / sp.factorial(q - 1)
    return float(omega * 2 * (q - 1) * sp.integrate(sp.expand(integrand), (R, 0, 1)))


def exp_eigenvalue(m, n, q):
    # e^{x.y} on the sphere of R^{2q}: (2 pi)^q I_{deg + q - 1}(1)
    return (2 * math.pi) ** q * iv(m + n + q - 1, 1.0)


@pytest.mark.parametrize("token,kind", [("const:1", "constant"), ("const:0.5-2i", "constant"),
                                        ("mono:2,1", "monomial"), ("disk:3,0", "disk_poly"),
                                        ("expre", "exp_re"), ("absp:2", "power_abs")])
def test_kernel_tokens(token, kind):
    k = KernelSpec.parse(token)
    assert k.kind == kind
    assert KernelSpec.parse(k.token) == k


@pytest.mark.parametrize("token", ["bogus", "mono:1", "mono:a,b", "disk:-1,0", "expre:3", "absp:-1", "const:x"])
def test_kernel_tokens_rejected(token):
    with pytest.raises(ParameterError):
        KernelSpec.parse(token)


def test_kernel_degrees():
    assert KernelSpec.constant(2).degree == 0
    assert KernelSpec.monomial(2, 1).degree == 3
    assert KernelSpec.power_abs(2).degree == 4
    assert KernelSpec.power_abs(0.5).degree is None
    assert KernelSpec.exp_re().degree is None


def test_cli_examples():
    assert fh.eigenvalue_disk(KernelSpec.disk(1, 0), 1, 0, 2).value == pytest.approx(math.pi ** 2, rel=1e-13)
    assert fh.eigenvalue_cylinder(KernelSpec.disk(1, 0), 1, 0, 2).value == pytest.approx(math.pi ** 2, rel=1e-13)
    assert fh.eigenvalue_disk(KernelSpec.constant(1), 0, 0, 3).value == pytest.approx(math.pi ** 3, rel=1e-13)
    assert abs(fh.eigenvalue_cylinder(KernelSpec.constant(1), 2, 1, 2).value) < 1e-10


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (2, 1), (2, 2), (0, 3)])
def test_monomial_eigenvalues_exact(a, b, q):
    for m in range(4):
        for n in range(4):
            expected = sympy_monomial_eigenvalue(a, b, m, n, q)
            for route in (fh.eigenvalue_disk, fh.eigenvalue_cylinder):
                got = route(KernelSpec.monomial(a, b), m, n, q).value
                assert abs(got - expected) <= 1e-12 * (1 + abs(expected))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_power_abs_matches_monomial(q):
    for m in range(3):
        lam = fh.eigenvalue_disk(KernelSpec.power_abs(2), m, m, q).value
        assert lam == pytest.approx(sympy_monomial_eigenvalue(2, 2, m, m, q), rel=1e-12)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_exp_eigenvalues_bessel(q):
    for m in range(4):
        for n in range(4):
            expected = exp_eigenvalue(m, n, q)
            assert fh.eigenvalue_disk(KernelSpec.exp_re(), m, n, q).value == pytest.approx(expected, rel=1e-9)
            assert fh.eigenvalue_cylinder(KernelSpec.exp_re(), m, n, q).value == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("q", [2, 3])
def test_real_funk_hecke_cross_check(q):
    for m in range(3):
        for n in range(3):
            lam = fh.eigenvalue_disk(KernelSpec.exp_re(), m, n, q).value
            assert lam == pytest.approx(fh.real_funk_hecke_eigenvalue(np.exp, m + n, 2 * q), rel=1e-10)


def test_real_funk_hecke_known_values():
    # S^1: int_0^{2pi} e^{cos t} cos(nt) dt = 2 pi I_n(1)
    for n in range(4):
        assert fh.real_funk_hecke_eigenvalue(np.exp, n, 2) == pytest.approx(2 * math.pi * iv(n, 1.0), rel=1e-12)
    with pytest.raises(ParameterError):
        fh.real_funk_hecke_eigenvalue(np.exp, 1, 1)


@pytest.mark.parametrize("q", [2, 3])
def test_diagonal_spectrum(q):
    for k in range(3):
        for l in range(3):
            for m in range(3):
                for n in range(3):
                    lam = fh.eigenvalue_disk(KernelSpec.disk(k, l), m, n, q).value
                    expected = sphere_area(q) / harmonic_dim(m, n, q) if (k, l) == (m, n) else 0.0
                    assert abs(lam - expected) <= 1e-12 * (1 + expected)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["const:1", "mono:2,1", "mono:1,1", "disk:2,1", "expre", "absp:2", "absp:1.5"]),
       st.integers(0, 3), st.integers(0, 3), st.integers(2, 4))
def test_routes_agree(token, m, n, q):
    k = KernelSpec.parse(token)
    lam = fh.eigenvalue_disk(k, m, n, q).value
    big = fh.eigenvalue_cylinder(k, m, n, q).value
    assert abs(lam - big) <= 1e-8 * (1 + abs(lam))


def test_conjugation_duality():
    # for kernels real on the reals Lambda_{m,n} = conj(Lambda_{n,m})
    for token in ("expre", "absp:1", "disk:1,1"):
        k = KernelSpec.parse(token)
        for m, n in [(0, 1), (2, 1), (3, 0)]:
            a = fh.eigenvalue_cylinder(k, m, n, 3).value
            b = fh.eigenvalue_cylinder(k, n, m, 3).value
            assert abs(a - np.conj(b)) < 1e-12


def test_callable_kernel():
    lam = fh.eigenvalue_disk(lambda z: np.exp(np.real(z)), 1, 1, 2).value
    assert lam == pytest.approx(exp_eigenvalue(1, 1, 2), rel=1e-9)
    lam = fh.eigenvalue_disk(lambda z: z * np.conj(z), 1, 1, 2, degree=2).value
    assert lam == pytest.approx(sympy_monomial_eigenvalue(1, 1, 1, 1, 2), rel=1e-12)
    with pytest.raises(ParameterError):
        fh.eigenvalue_disk("not a kernel", 0, 0, 2)


@pytest.mark.parametrize("variant", fh.VARIANTS)
def test_eigenfunction_variants(variant, rng):
    w = random_sphere(rng, 1, 2)[0]
    for token in ("mono:2,1", "expre", "absp:1"):
        k = KernelSpec.parse(token)
        for m, n in [(1, 0), (2, 1), (0, 2)]:
            for y in harmonic_basis(m, n, 2).elements:
                direct = fh.apply_funk_hecke(k, y, w, variant)
                predicted = fh.predicted_funk_hecke(k, y, w, variant)
                assert abs(direct - predicted) <= 1e-10 * (1 + abs(predicted))


def test_eigenfunction_q3(rng):
    w = random_sphere(rng, 1, 3)[0]
    y = harmonic_basis(2, 1, 3).elements[3]
    for variant in fh.VARIANTS:
        assert fh.funk_hecke_residual(KernelSpec.exp_re(), y, w, variant) < 1e-10


def test_apply_preconditions():
    w = np.array([1, 0], dtype=complex)
    not_harmonic = PolyZZbar(2, {((1, 0), (1, 0)): 1})
    with pytest.raises(PreconditionError):
        fh.apply_funk_hecke(KernelSpec.exp_re(), not_harmonic, w)
    mixed = PolyZZbar(2, {((1, 0), (0, 0)): 1, ((0, 0), (0, 1)): 1})
    with pytest.raises(PreconditionError):
        fh.apply_funk_hecke(KernelSpec.exp_re(), mixed, w)
    y = harmonic_basis(1, 0, 2).elements[0]
    with pytest.raises(ParameterError):
        fh.apply_funk_hecke(KernelSpec.exp_re(), y, w, "KzzY")


@pytest.mark.parametrize("q", [2, 3, 4])
def test_bizonal_routes(q, rng):
    pole = random_sphere(rng, 1, q)[0]
    expected = {"const:1": sphere_area(q), "expre": exp_eigenvalue(0, 0, q)}
    for token, value in expected.items():
        k = KernelSpec.parse(token)
        for method in ("sphere", "disk", "cylinder", "radial"):
            assert fh.bizonal_sphere_integral(k, q, method) == pytest.approx(value, rel=1e-10)
        assert fh.bizonal_sphere_integral(k, q, "sphere", pole=pole) == pytest.approx(value, rel=1e-10)
    with pytest.raises(ParameterError):
        fh.bizonal_sphere_integral(KernelSpec.exp_re(), q, "polar")


@pytest.mark.parametrize("q", [1, 2, 3])
def test_ball_identity_exp(q, rng):
    # int over the ball of R^{2q} of e^{a x_1} = (2 pi)^q I_q(a) / a^q
    w = 0.7 * random_sphere(rng, 1, q)[0]
    res = fh.ball_zonal_integral(KernelSpec.exp_re(), w, q, degree=20)
    expected = (2 * math.pi) ** q * iv(q, 0.7) / 0.7 ** q
    assert res.lhs == pytest.approx(expected, rel=1e-11)
    assert res.residual < 1e-11 * expected


def test_ball_identity_constant_and_radial():
    w = np.array([0.3, 0.1j])
    assert fh.ball_zonal_integral(KernelSpec.constant(1), w, 2, degree=0).lhs == pytest.approx(ball_volume(2))
    res = fh.ball_radial_integral(lambda r: r, 1)
    assert res.lhs == pytest.approx(2 * math.pi / 3, rel=1e-13)
    assert res.residual < 1e-13


@pytest.mark.parametrize("q", [2, 3])
def test_cylinder_orthogonality(q):
    from fhk.special_poly import ortho_constant
    for mu in range(3):
        for nu in range(3):
            for m in range(3):
                for n in range(3):
                    chk = fh.cylinder_orthogonality_check(mu, nu, m, n, q)
                    expected = ortho_constant(m, n, q) if (mu, nu) == (m, n) else 0.0
                    assert chk.expected == expected
                    assert chk.residual <= 1e-12 * (1 + expected)
                    if mu - nu == m - n:
                        assert abs(chk.reduced - chk.reduced_expected) < 1e-12
                    else:
                        assert chk.reduced_expected is None


def test_cylinder_mass():
    assert fh.cylinder_mass(3) == pytest.approx(2 * math.pi ** 3 / 2)


def test_reduced_orthogonality_off_stratum_is_not_zero():
    # (1,0) against (0,0): the B_q integral of sqrt(1 - |eta|^2) is positive, so the
    # reduced identity is only claimed when mu - nu = m - n
    chk = fh.cylinder_orthogonality_check(1, 0, 0, 0, 2)
    assert chk.reduced.real > 0.1
    assert chk.reduced_expected is None
    assert abs(chk.value) < 1e-14
