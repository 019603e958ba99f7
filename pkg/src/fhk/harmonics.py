"""Polynomials in z and conj(z), the complex Laplacian, and orthonormal bases
of spherical harmonics of bidegree (m, n) on the unit sphere of C^q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import gammaln

from .errors import ConsistencyError, DegeneracyError, ParameterError
from .special_poly import check_index, disk_poly, harmonic_dim, sphere_area

SV_THRESHOLD = 1e-10
PIVOT_MIN = 1e-12


def multi_indices(total, q):
    """All q-tuples of nonnegative integers summing to `total`, lexicographically descending."""
    out = []
    # stars and bars: positions of q-1 bars among total+q-1 slots
    for bars in combinations(range(total + q - 1), q - 1):
        prev = -1
        parts = []
        for b in bars + (total + q - 1,):
            parts.append(b - prev - 1)
            prev = b
        out.append(tuple(parts))
    out.sort(reverse=True)
    return out


def monomial_basis(m, n, q):
    """Monomials z^alpha conj(z)^beta with |alpha| = m, |beta| = n, in graded lex order."""
    return [(a, b) for a in multi_indices(m, q) for b in multi_indices(n, q)]


@dataclass(frozen=True)
class PolyZZbar:
    """Sparse polynomial sum c_{alpha,beta} z^alpha conj(z)^beta on C^q."""

    q: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (a, b), c in self.terms.items():
            a, b = tuple(int(i) for i in a), tuple(int(i) for i in b)
            if len(a) != self.q or len(b) != self.q:
                raise ParameterError(f"multi-index length differs from q={self.q}")
            if min(a + b, default=0) < 0:
                raise ParameterError("multi-indices must be nonnegative")
            if c != 0:
                clean[(a, b)] = complex(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_vector(cls, q, monomials, coeffs, drop=0.0):
        return cls(q, {mono: c for mono, c in zip(monomials, coeffs) if abs(c) > drop})

    @property
    def bidegrees(self):
        return {(sum(a), sum(b)) for a, b in self.terms}

    def __call__(self, z):
        return poly_eval(self, z)

    def conj(self):
        return PolyZZbar(self.q, {(b, a): np.conj(c) for (a, b), c in self.terms.items()})

    def scaled(self, s):
        return PolyZZbar(self.q, {k: s * c for k, c in self.terms.items()})

    def coefficient_norm(self):
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.terms.values())))

    def to_dict(self):
        return {"terms": [{"alpha": list(a), "beta": list(b), "re": c.real, "im": c.imag}
                          for (a, b), c in sorted(self.terms.items(), reverse=True)]}


def _powers(z, top):
    """pw[j][k] = z[:, j] ** k for k <= top."""
    pw = np.ones((z.shape[1], top + 1, z.shape[0]), dtype=complex)
    for k in range(1, top + 1):
        pw[:, k, :] = pw[:, k - 1, :] * z.T
    return pw


def monomial_matrix(monomials, z):
    """Values of each monomial at each row of z; shape (N, len(monomials))."""
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    if not monomials:
        return np.zeros((z.shape[0], 0), dtype=complex)
    top = max(max(a + b) for a, b in monomials)
    pw = _powers(z, top)
    pwc = np.conj(pw)
    out = np.empty((z.shape[0], len(monomials)), dtype=complex)
    for col, (a, b) in enumerate(monomials):
        v = np.ones(z.shape[0], dtype=complex)
        for j in range(z.shape[1]):
            if a[j]:
                v = v * pw[j, a[j]]
            if b[j]:
                v = v * pwc[j, b[j]]
        out[:, col] = v
    return out


def poly_eval(p, z):
    """Evaluate `p` at one point (shape (q,)) or at rows of an (N, q) array."""
    za = np.asarray(z, dtype=complex)
    single = za.ndim == 1
    za = np.atleast_2d(za)
    if za.shape[1] != p.q:
        raise ParameterError(f"point dimension {za.shape[1]} does not match q={p.q}")
    if not p.terms:
        out = np.zeros(za.shape[0], dtype=complex)
    else:
        monos = list(p.terms)
        coeffs = np.array([p.terms[k] for k in monos])
        out = monomial_matrix(monos, za) @ coeffs
    return complex(out[0]) if single else out


def laplacian(p):
    """4 * sum_j d^2 p / dz_j d conj(z_j), term by term."""
    out = {}
    for (a, b), c in p.terms.items():
        for j in range(p.q):
            if a[j] and b[j]:
                a2 = a[:j] + (a[j] - 1,) + a[j + 1:]
                b2 = b[:j] + (b[j] - 1,) + b[j + 1:]
                out[(a2, b2)] = out.get((a2, b2), 0) + 4 * a[j] * b[j] * c
    return PolyZZbar(p.q, out)


def laplacian_matrix(m, n, q):
    """Matrix of the Laplacian from P_{m,n}(C^q) to P_{m-1,n-1}(C^q) in monomial coordinates."""
    cols = monomial_basis(m, n, q)
    if m == 0 or n == 0:
        return np.zeros((0, len(cols))), cols
    rows = {mono: i for i, mono in enumerate(monomial_basis(m - 1, n - 1, q))}
    mat = np.zeros((len(rows), len(cols)))
    for col, mono in enumerate(cols):
        for key, c in laplacian(PolyZZbar(q, {mono: 1})).terms.items():
            mat[rows[key], col] = c.real
    return mat, cols


def nullspace(mat, ncols):
    """Orthonormal basis (as columns) of the nullspace, via SVD with a relative threshold."""
    if mat.shape[0] == 0:
        return np.eye(ncols)
    _, s, vh = np.linalg.svd(mat)
    rank = int(np.sum(s > SV_THRESHOLD * s[0])) if s.size else 0
    return np.conj(vh[rank:]).T


@dataclass(frozen=True, eq=False)
class HarmonicBasis:
    """A basis of the harmonics of bidegree (m, n), stored as a coefficient matrix
    over the monomials of P_{m,n}(C^q) (one column per element)."""

    m: int
    n: int
    q: int
    monomials: tuple
    coeffs: np.ndarray
    gram_residual: float = float("nan")

    def __len__(self):
        return self.coeffs.shape[1]

    @property
    def elements(self):
        return [PolyZZbar.from_vector(self.q, self.monomials, self.coeffs[:, j])
                for j in range(len(self))]

    def evaluate(self, z):
        """Values of every element; shape (N, d) for (N, q) input, (d,) for one point."""
        za = np.asarray(z, dtype=complex)
        vals = monomial_matrix(self.monomials, np.atleast_2d(za)) @ self.coeffs
        return vals[0] if za.ndim == 1 else vals

    def conj(self):
        """Conjugated elements: a basis of bidegree (n, m)."""
        index = {mono: i for i, mono in enumerate(self.monomials)}
        monos = monomial_basis(self.n, self.m, self.q)
        perm = [index[(b, a)] for a, b in monos]
        return HarmonicBasis(self.n, self.m, self.q, tuple(monos),
                             np.conj(self.coeffs[perm]), self.gram_residual)

    def recombined(self, unitary):
        return HarmonicBasis(self.m, self.n, self.q, self.monomials,
                             self.coeffs @ np.asarray(unitary), self.gram_residual)

    def laplacian_residual(self):
        return max((laplacian(p).coefficient_norm() for p in self.elements), default=0.0)

    def to_json(self):
        doc = {"m": self.m, "n": self.n, "q": self.q,
               "elements": [p.to_dict() for p in self.elements]}
        return json.dumps(doc, sort_keys=True)


def solid_harmonic_basis(m, n, q):
    """Unnormalized basis of the kernel of the Laplacian on P_{m,n}(C^q)."""
    m, n, q = check_index(m, n, q)
    mat, monos = laplacian_matrix(m, n, q)
    ns = nullspace(mat, len(monos))
    expected = harmonic_dim(m, n, q)
    if ns.shape[1] != expected:
        raise ConsistencyError(
            f"Laplacian nullspace has dimension {ns.shape[1]}, d({m},{n}) = {expected} at q={q}")
    return HarmonicBasis(m, n, q, tuple(monos), ns.astype(complex))


def sphere_moment_gram(monomials, q):
    """G[i, j] = int z^{a_i} conj(z)^{b_i} conj(z^{a_j} conj(z)^{b_j}) d sigma, in closed form.

    The moment of z^p conj(z)^s vanishes unless p = s and then equals
    2 pi^q p! / (q - 1 + |p|)!.
    """
    a = np.array([mono[0] for mono in monomials], dtype=float).reshape(len(monomials), q)
    b = np.array([mono[1] for mono in monomials], dtype=float).reshape(len(monomials), q)
    p = a[:, None, :] + b[None, :, :]
    s = b[:, None, :] + a[None, :, :]
    match = np.all(p == s, axis=2)
    logm = np.sum(gammaln(p + 1), axis=2) - gammaln(q + np.sum(p, axis=2))
    return np.where(match, 2 * np.pi ** q * np.exp(logm), 0.0)


def quadrature_gram(basis, rule):
    vals = monomial_matrix(list(basis.monomials), rule.nodes)
    return (vals * rule.weights[:, None]).T @ np.conj(vals)


def orthonormalize_on_sphere(basis, rule=None):
    """Gram-Schmidt in the L^2(sphere) inner product, done as two Cholesky passes.

    The inner product acts on coefficient vectors through the Gram matrix of the
    monomials: closed-form sphere moments by default, or quadrature with `rule`.
    Each pass replaces the coefficients C by C L^{-H}, where L L^H is the Gram
    matrix of the current elements; L^{-H} is upper triangular, so this is
    Gram-Schmidt in the given element order.
    """
    m, n, q = basis.m, basis.n, basis.q
    if rule is None:
        gram_m = sphere_moment_gram(basis.monomials, q)
    else:
        if rule.domain != "sphere" or rule.q != q:
            raise ParameterError("orthonormalization needs a sphere rule for the same q")
        if rule.exact_degree < 2 * (m + n):
            raise ParameterError(f"rule exact to degree {rule.exact_degree} < {2 * (m + n)}")
        gram_m = quadrature_gram(basis, rule)

    def element_gram(c):
        # P[i, j] = <Y_j, Y_i>
        return np.conj(c).T @ gram_m.T @ c

    coeffs = np.array(basis.coeffs, dtype=complex)
    d = coeffs.shape[1]
    for _ in range(2):
        p = element_gram(coeffs)
        p = (p + np.conj(p).T) / 2
        try:
            chol = np.linalg.cholesky(p)
        except np.linalg.LinAlgError:
            raise DegeneracyError("harmonic basis elements are numerically dependent") from None
        pivots = np.abs(np.diag(chol))
        if d and pivots.min() < PIVOT_MIN:
            j = int(np.argmin(pivots))
            raise DegeneracyError(f"basis element {j} is numerically dependent (pivot {pivots[j]:.3e})")
        coeffs = solve_triangular(np.conj(chol), coeffs.T, lower=True).T
    # the largest coefficient of each element is made real and positive
    for j in range(d):
        k = int(np.argmax(np.abs(coeffs[:, j])))
        coeffs[:, j] *= np.conj(coeffs[k, j]) / abs(coeffs[k, j])
    resid = float(np.max(np.abs(element_gram(coeffs) - np.eye(d)))) if d else 0.0
    coeffs.setflags(write=False)
    return HarmonicBasis(m, n, q, basis.monomials, coeffs, resid)


@lru_cache(maxsize=None)
def harmonic_basis(m, n, q):
    """Orthonormal basis of the spherical harmonics of bidegree (m, n) on C^q (cached)."""
    return orthonormalize_on_sphere(solid_harmonic_basis(m, n, q))


def addition_formula_residual(basis, z, w):
    """|R_{m,n}(<z, w>) - (omega_q / d) sum_j Y_j(z) conj(Y_j(w))| for rows of z and w."""
    m, n, q = basis.m, basis.n, basis.q
    za = np.atleast_2d(np.asarray(z, dtype=complex))
    wa = np.atleast_2d(np.asarray(w, dtype=complex))
    inner = np.sum(za * np.conj(wa), axis=1)
    lhs = disk_poly(m, n, q, inner)
    rhs = sphere_area(q) / harmonic_dim(m, n, q) * np.sum(
        basis.evaluate(za) * np.conj(basis.evaluate(wa)), axis=1)
    res = np.abs(lhs - rhs)
    return float(res[0]) if np.ndim(z) == 1 else res
