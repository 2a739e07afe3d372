import numpy as np
import pytest

from ttolab.blaschke import BlaschkeProduct
from ttolab.harmonic import TrigPoly
from ttolab.modelspace import build_basis, conjugate_kernel
from ttolab.truncops import (
    hankel_matrix,
    hankel_toeplitz_defect,
    rank_one_matrix,
    rank_one_symbol,
    standard_symbol,
    toeplitz_matrix,
    zero_symbol_test,
)
from ttolab.truncops import test_vector_ratio as vector_ratio


@pytest.fixture(scope="module")
def power_basis():
    return build_basis(BlaschkeProduct([0, 0, 0, 0]))


@pytest.fixture(scope="module")
def generic_basis():
    return build_basis(BlaschkeProduct([0.3, -0.4j, 0.1 + 0.5j]))


def classical_toeplitz(phi: TrigPoly, n: int) -> np.ndarray:
    mat = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            mat[i, j] = phi.coeffs.get(i - j, 0.0)
    return mat


def classical_hankel(phi: TrigPoly, n: int) -> np.ndarray:
    # row basis conj(z e_i): entry (i, j) = phihat(-1 - i - j)
    mat = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            mat[i, j] = phi.coeffs.get(-1 - i - j, 0.0)
    return mat


def test_toeplitz_matches_symbol_coefficients(power_basis):
    phi = TrigPoly({-2: 1.0j, -1: 0.5, 0: -1.0, 1: 2.0, 3: 0.25})
    mat = toeplitz_matrix(phi, power_basis)
    assert np.max(np.abs(mat.entries - classical_toeplitz(phi, 4))) < 1e-12


def test_hankel_matches_symbol_coefficients(power_basis):
    phi = TrigPoly({-7: 2.0, -4: 1.0 - 1.0j, -1: 0.5, 0: 3.0, 2: -1.0})
    mat = hankel_matrix(phi, power_basis)
    assert np.max(np.abs(mat.entries - classical_hankel(phi, 4))) < 1e-12


def test_hankel_kills_analytic_part(power_basis):
    phi = TrigPoly({0: 5.0, 1: -2.0, 3: 1.0j})
    assert hankel_matrix(phi, power_basis).norm() < 1e-12


def test_analytic_multiplicativity(generic_basis):
    f = TrigPoly({0: 1.0, 1: -0.5j})
    g = TrigPoly({1: 2.0, 2: 0.3})
    left = toeplitz_matrix(f * g, generic_basis)
    right = toeplitz_matrix(f, generic_basis) @ toeplitz_matrix(g, generic_basis)
    assert np.max(np.abs(left.entries - right.entries)) < 1e-10


def test_toeplitz_adjoint_symbol(generic_basis):
    phi = TrigPoly({-1: 1.0j, 2: 0.5})
    a = toeplitz_matrix(phi, generic_basis)
    b = toeplitz_matrix(phi.conjugate(), generic_basis)
    assert np.max(np.abs(a.adjoint().entries - b.entries)) < 1e-10


def test_hankel_toeplitz_link(generic_basis):
    phi = TrigPoly({-3: 1.0, -1: -2.0j, 1: 0.7})
    assert hankel_toeplitz_defect(phi, generic_basis) < 1e-11


def test_rank_one_identity(generic_basis):
    lam = 0.25 - 0.35j
    theta = generic_basis.theta
    direct = toeplitz_matrix(rank_one_symbol(theta, lam), generic_basis)
    outer = rank_one_matrix(lam, generic_basis)
    assert np.max(np.abs(direct.entries - outer.entries)) < 1e-11
    # the operator norm equals ||k_lam|| * ||ktilde_lam|| = ||k_lam||^2
    expect = (1 - abs(theta(lam)) ** 2) / (1 - abs(lam) ** 2)
    assert abs(direct.norm() - expect) < 1e-10


def test_zero_symbol(generic_basis):
    theta = generic_basis.theta
    square = theta.square()
    phi = (square * TrigPoly({1: 1.0, 2: -0.5})).conj() + TrigPoly({0: 1.0, 3: 2.0})
    is_zero, norm = zero_symbol_test(phi, generic_basis)
    assert is_zero, f"hankel norm {norm}"


def test_standard_symbol_equivalence(generic_basis):
    phi = TrigPoly({-5: 1.0, -2: 2.0j, 0: -1.0, 2: 0.5})
    phi_s = standard_symbol(phi, generic_basis.theta, quad=generic_basis.quad)
    gap = hankel_matrix(phi, generic_basis).entries \
        - hankel_matrix(phi_s, generic_basis).entries
    assert np.max(np.abs(gap)) < 1e-10


def test_operator_matrix_algebra(generic_basis):
    phi = TrigPoly({-1: 1.0, 1: 1.0})
    a = toeplitz_matrix(phi, generic_basis)
    sv = a.singular_values()
    assert np.all(np.diff(sv) <= 0)
    assert abs(a.norm() - sv[0]) < 1e-14
    assert abs(a.schatten_norm(2.0) - np.sqrt(np.sum(sv**2))) < 1e-12
    prod = a @ a.inverse()
    assert np.max(np.abs(prod.entries - np.eye(generic_basis.size))) < 1e-10


def test_test_vector_ratio_small_near_boundary():
    lam = 1 - 2.0**-9
    theta = BlaschkeProduct([1 - 2.0**-n for n in range(1, 10)])
    basis = build_basis(theta, gram_tol=1e-7)
    phi1 = TrigPoly({-1: 1.0})
    est = vector_ratio(basis, phi1, None, lam, zeta=np.conj(lam), zeta1=np.conj(lam))
    # kernel at the innermost zero is nearly an eigenvector
    assert est.ratio < 0.1
    assert est.ratio <= np.sqrt(2 * (est.poisson_bound + est.multiplier_bound)) + 1e-12


def test_test_vector_requires_some_symbol(generic_basis):
    with pytest.raises(ValueError):
        vector_ratio(generic_basis, None, None, 0.3, zeta=0.0)
