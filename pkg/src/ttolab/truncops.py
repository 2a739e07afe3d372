"""Truncated Toeplitz and Hankel operators in model-space coordinates.

A bounded symbol phi induces the truncated Toeplitz operator (compress
multiplication by phi to the model space) and the truncated Hankel
operator (multiply, then project onto the conjugate space conj(z * K)).
Both are represented as dense matrices in the orthonormal model-space
basis; the Hankel codomain is spanned by conj(z e_j), fixed once and for
all so that different construction routes can be compared entrywise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blaschke import BlaschkeProduct
from .harmonic import (DEFAULT_QUADRATURE, ConjSymbol, QuadratureSettings,
                       RationalSymbol, Symbol, TrigPoly,
                       adaptive_boundary_mean, matrix_integral,
                       poisson_extension, unit_nodes)
from .modelspace import (BasisCombination, ConjugateKernel, ModelSpaceBasis,
                         build_basis, conjugate_kernel,
                         vanishing_at_origin_subspace)


@dataclass
class OperatorMatrix:
    """Dense operator matrix with typed domain/codomain tags.

    Tags are plain strings derived from the underlying Blaschke product;
    composition refuses mismatched tags, which catches most
    wrong-space bugs at desk scale.
    """

    entries: np.ndarray
    domain: str
    codomain: str
    provenance: str = ""

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2:
            raise ValueError("operator entries must form a 2-d array")

    @property
    def shape(self):
        return self.entries.shape

    def singular_values(self) -> np.ndarray:
        if 0 in self.entries.shape:
            return np.zeros(0)
        return np.linalg.svd(self.entries, compute_uv=False)

    def norm(self) -> float:
        """Operator (spectral) norm."""
        sv = self.singular_values()
        return float(sv[0]) if sv.size else 0.0

    def schatten_norm(self, p: float) -> float:
        sv = self.singular_values()
        if not p > 0:
            raise ValueError("Schatten exponent must be positive")
        if np.isinf(p):
            return float(sv[0]) if sv.size else 0.0
        return float(np.sum(sv**p) ** (1.0 / p))

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """self after other (matrix product), with tag checking."""
        if self.domain != other.codomain:
            raise ValueError(
                f"composition mismatch: {self.domain!r} != {other.codomain!r}")
        return OperatorMatrix(self.entries @ other.entries, other.domain,
                              self.codomain, f"({self.provenance})∘({other.provenance})")

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.codomain, self.domain,
                              f"adjoint({self.provenance})")

    def inverse(self) -> "OperatorMatrix":
        return OperatorMatrix(np.linalg.inv(self.entries), self.codomain,
                              self.domain, f"inverse({self.provenance})")

    def to_dict(self) -> dict:
        m, n = self.entries.shape
        return {
            "shape": [m, n],
            "domain": self.domain,
            "codomain": self.codomain,
            "provenance": self.provenance,
            "entries": [[[v.real, v.imag] for v in row] for row in self.entries],
        }


def toeplitz_matrix(phi: Symbol, basis: ModelSpaceBasis,
                    quad: QuadratureSettings | None = None) -> OperatorMatrix:
    """Matrix of the truncated Toeplitz operator of phi on the model space.

    Entry (j, k) is the inner product of phi * e_k against e_j; the
    integrals are evaluated together by adaptive quadrature.
    """
    quad = quad or basis.quad
    entries, _ = matrix_integral(basis.sample, basis.sample, phi, quad,
                                 m_start=basis.m_hint)
    tag = basis.space_tag()
    return OperatorMatrix(entries, tag, tag, "toeplitz:boundary-quadrature")


def _conjugate_row_sample(basis: ModelSpaceBasis):
    """Samples of conj(conj(z e_j)) = z e_j, the Hankel codomain rows."""

    def sample(nodes):
        return np.conj(nodes[None, :] * basis.sample(nodes))

    return sample


def hankel_matrix(phi: Symbol, basis: ModelSpaceBasis,
                  quad: QuadratureSettings | None = None) -> OperatorMatrix:
    """Matrix of the truncated Hankel operator of phi.

    The operator sends the model space into conj(z * K); in the bases
    {e_k} -> {conj(z e_j)} the entry (j, k) is int phi e_k z e_j dm.
    """
    quad = quad or basis.quad
    entries, _ = matrix_integral(_conjugate_row_sample(basis), basis.sample,
                                 phi, quad, m_start=basis.m_hint)
    return OperatorMatrix(entries, basis.space_tag(), basis.conjugate_space_tag(),
                          "hankel:boundary-quadrature")


def conjugate_multiplier_matrix(basis: ModelSpaceBasis,
                                quad: QuadratureSettings | None = None) -> OperatorMatrix:
    """Matrix of multiplication by conj(theta): model space -> conj(z * K).

    This map is a surjective isometry (it implements the canonical
    conjugation up to the fixed codomain basis), so the matrix is unitary.
    """
    quad = quad or basis.quad
    entries, _ = matrix_integral(_conjugate_row_sample(basis), basis.sample,
                                 basis.theta.conj(), quad, m_start=basis.m_hint)
    return OperatorMatrix(entries, basis.space_tag(), basis.conjugate_space_tag(),
                          "conj-theta-multiplier")


def hankel_toeplitz_defect(phi: Symbol, basis: ModelSpaceBasis,
                           quad: QuadratureSettings | None = None) -> float:
    """Norm of Hankel(phi) - conj(theta) * Toeplitz(theta * phi).

    The two constructions agree identically for bounded symbols; the
    returned defect is a pure consistency measurement of the pipeline.
    """
    gamma = hankel_matrix(phi, basis, quad)
    lifted = toeplitz_matrix(basis.theta * phi, basis, quad)
    link = conjugate_multiplier_matrix(basis, quad)
    diff = gamma.entries - (link @ lifted).entries
    return float(np.linalg.norm(diff, 2)) if diff.size else 0.0


def rank_one_symbol(theta: BlaschkeProduct, lam: complex) -> Symbol:
    """Symbol theta / (z - lam) whose truncated Toeplitz operator is the
    rank-one map h -> (h, k_lam) ktilde_lam."""
    lam = complex(lam)
    if not abs(lam) < 1:
        raise ValueError("lam must lie inside the open disk")
    return theta * RationalSymbol(TrigPoly.one(), TrigPoly({0: -lam, 1: 1.0}))


def rank_one_matrix(lam: complex, basis: ModelSpaceBasis) -> OperatorMatrix:
    """Rank-one operator h -> (h, k_lam) ktilde_lam, built without quadrature
    on the symbol: an outer product of the projected difference-quotient
    kernel with point evaluations of the basis."""
    ktilde = conjugate_kernel(basis.theta, lam)
    col = basis.project(ktilde)
    row = basis.sample(np.array([complex(lam)]))[:, 0]
    tag = basis.space_tag()
    return OperatorMatrix(np.outer(col, row), tag, tag, "rank-one:kernel-outer-product")


@dataclass
class StandardSymbol:
    """Projection of a symbol onto conj(K_{theta^2} ∩ z H^2).

    The subspace has dimension 2 deg(theta) - 1 and consists of the
    conjugates of model-space functions (for theta^2) vanishing at the
    origin.  Truncated Hankel operators see only this part of the symbol.
    """

    theta: BlaschkeProduct
    coeffs: np.ndarray           # coordinates in the orthonormal subspace basis
    subspace: np.ndarray         # columns: subspace basis in K_{theta^2} coordinates
    symbol: Symbol = field(repr=False)

    def __call__(self, z):
        return self.symbol(z)

    @property
    def dimension(self) -> int:
        return self.subspace.shape[1]


def standard_symbol(phi: Symbol, theta: BlaschkeProduct,
                    quad: QuadratureSettings = DEFAULT_QUADRATURE) -> StandardSymbol:
    """Standard representative of phi modulo symbols with zero Hankel part."""
    square_basis = build_basis(theta.square(), quad)
    U = vanishing_at_origin_subspace(square_basis)

    def sample(nodes):
        subspace = U.T @ square_basis.sample(nodes)  # g_m = sum_i U[i, m] f_i
        return phi(nodes)[None, :] * subspace

    # coeffs[m] = int phi g_m dm = (phi, conj(g_m))
    coeffs, _ = adaptive_boundary_mean(sample, quad, m_start=square_basis.m_hint)
    # realized symbol: sum_m coeffs[m] conj(g_m) = conj(combination)
    combo = BasisCombination(theta.square().zeros, U @ np.conj(coeffs))
    return StandardSymbol(theta, coeffs, U, ConjSymbol(combo))


def zero_symbol_test(phi: Symbol, basis: ModelSpaceBasis, tol: float = 1e-10,
                     quad: QuadratureSettings | None = None):
    """Decide whether the truncated Hankel operator of phi vanishes.

    Returns (is_zero, norm) where norm is the operator norm of the
    Hankel matrix; phi annihilates exactly when it lies in the direct sum
    of conj(theta^2 H^2) and H^2 (bounded parts).
    """
    norm = hankel_matrix(phi, basis, quad).norm()
    return norm < tol, norm


@dataclass(frozen=True)
class TestVectorEstimate:
    """Almost-eigenvector diagnostics for a difference-quotient kernel."""

    ratio: float            # |(A - zeta) ktilde| / |ktilde|
    poisson_bound: float    # 8 * poisson integral of |phi1 - zeta1|^2 at lam
    multiplier_bound: float  # 8 |theta(lam)|^2 sup|phi2|^2 + |phi2(lam) - zeta2|^2
    zeta1: complex
    zeta2: complex


def test_vector_ratio(basis: ModelSpaceBasis, phi1: Symbol | None,
                      phi2: Symbol | None, lam: complex, zeta: complex,
                      zeta1: complex | None = None,
                      quad: QuadratureSettings | None = None) -> TestVectorEstimate:
    """How nearly the kernel at lam is a zeta-eigenvector of the operator.

    The symbol splits as phi = phi1 + phi2 with phi2 analytic; zeta
    splits accordingly as zeta1 + zeta2.  When zeta1 is not supplied it
    defaults to the harmonic extension of phi1 at lam.  The two
    diagnostic bounds control the contributions of the split parts.
    """
    quad = quad or basis.quad
    theta = basis.theta
    lam = complex(lam)
    zeta = complex(zeta)
    if phi1 is None and phi2 is None:
        raise ValueError("at least one of phi1, phi2 is required")
    if isinstance(phi2, TrigPoly) and not phi2.is_analytic():
        raise ValueError("phi2 must be analytic (nonnegative frequencies)")

    if zeta1 is None:
        zeta1 = poisson_extension(phi1, lam, quad) if phi1 is not None else 0.0
    zeta1 = complex(zeta1)
    zeta2 = zeta - zeta1

    phi = _combine(phi1, phi2)
    matrix = toeplitz_matrix(phi, basis, quad)
    coeffs = basis.project(ConjugateKernel(theta, lam))
    shifted = matrix.entries @ coeffs - zeta * coeffs
    ratio = float(np.linalg.norm(shifted) / np.linalg.norm(coeffs))

    if phi1 is not None:
        def sample(nodes):
            kern = (1.0 - abs(lam) ** 2) / np.abs(nodes - lam) ** 2
            return np.abs(phi1(nodes) - zeta1) ** 2 * kern
        pval, _ = adaptive_boundary_mean(sample, quad)
        poisson_bound = 8.0 * float(np.real(pval))
    else:
        poisson_bound = 8.0 * abs(zeta1) ** 2

    if phi2 is not None:
        sup2 = float(np.max(np.abs(phi2(unit_nodes(1 << 13)))))
        at_lam = complex(phi2(lam))
        multiplier_bound = (8.0 * abs(complex(theta(lam))) ** 2 * sup2**2
                            + abs(at_lam - zeta2) ** 2)
    else:
        multiplier_bound = abs(zeta2) ** 2

    return TestVectorEstimate(ratio, poisson_bound, multiplier_bound, zeta1, zeta2)


def _combine(phi1, phi2):
    if phi1 is None:
        return phi2
    if phi2 is None:
        return phi1
    if isinstance(phi1, TrigPoly) and isinstance(phi2, TrigPoly):
        return phi1 + phi2
    return phi1 + phi2
