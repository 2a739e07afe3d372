import numpy as np
import pytest

from ttolab.blaschke import BlaschkeProduct
from ttolab.harmonic import TrigPoly, inner_product, unit_nodes
from ttolab.modelspace import (
    ModelSpaceError,
    build_basis,
    conjugate_kernel,
    reproducing_kernel,
    vanishing_at_origin_subspace,
)


THETA = BlaschkeProduct([0.3, -0.5j, 0.2 + 0.4j])


def gram(basis, m=1 << 12):
    nodes = unit_nodes(m)
    samples = basis.sample(nodes)
    return samples @ samples.conj().T / m


def test_basis_orthonormal():
    basis = build_basis(THETA)
    defect = np.max(np.abs(gram(basis) - np.eye(basis.size)))
    assert defect < 1e-12


def test_monomial_basis_is_power_basis():
    basis = build_basis(BlaschkeProduct([0, 0, 0]))
    nodes = unit_nodes(8)
    for j in range(3):
        assert np.allclose(basis.element(j)(nodes), nodes**j)


def test_basis_size_matches_degree():
    for d in range(1, 6):
        theta = BlaschkeProduct([0.1 * k for k in range(d)])
        assert build_basis(theta).size == d


def test_reproducing_property(rng):
    basis = build_basis(THETA)
    coeffs = rng.normal(size=basis.size) + 1j * rng.normal(size=basis.size)
    f = basis.combination(coeffs)
    for lam in (0.2, -0.3 + 0.4j, 0.7j):
        k = reproducing_kernel(THETA, lam)
        val = inner_product(f, k)
        assert abs(val - f(lam)) < 1e-10


def test_kernel_norm_formula():
    lam = 0.4 - 0.2j
    k = reproducing_kernel(THETA, lam)
    expect = (1 - abs(THETA(lam)) ** 2) / (1 - abs(lam) ** 2)
    assert abs(k.norm() ** 2 - expect) < 1e-12
    kt = conjugate_kernel(THETA, lam)
    assert abs(kt.norm() ** 2 - expect) < 1e-12


def test_conjugate_kernel_boundary_relation():
    # on the circle the two kernels are related by ktilde = theta zbar conj(k)
    lam = 0.3 + 0.3j
    nodes = unit_nodes(64)
    k = reproducing_kernel(THETA, lam)
    kt = conjugate_kernel(THETA, lam)
    rhs = THETA(nodes) * np.conj(nodes) * np.conj(k(nodes))
    assert np.max(np.abs(kt(nodes) - rhs)) < 1e-12


def test_projection_recovers_member(rng):
    basis = build_basis(THETA)
    coeffs = rng.normal(size=basis.size) + 1j * rng.normal(size=basis.size)
    f = basis.combination(coeffs)
    assert np.max(np.abs(basis.project(f) - coeffs)) < 1e-10


def test_projection_kills_theta_multiples():
    basis = build_basis(THETA)
    g = THETA * TrigPoly({2: 1.0})  # theta * z^2 lies in theta H^2
    assert np.max(np.abs(basis.project(g))) < 1e-10


def test_vanishing_subspace():
    basis = build_basis(THETA)
    cols = vanishing_at_origin_subspace(basis)
    assert cols.shape == (basis.size, basis.size - 1)
    # orthonormal columns spanning functions that vanish at the origin
    assert np.max(np.abs(cols.conj().T @ cols - np.eye(basis.size - 1))) < 1e-12
    for j in range(cols.shape[1]):
        f = basis.combination(cols[:, j])
        assert abs(f(0.0)) < 1e-12


def test_degree_zero_gives_trivial_space():
    basis = build_basis(BlaschkeProduct([]))
    assert basis.size == 0
    assert basis.gram_defect == 0.0


def test_gram_tolerance_enforced():
    with pytest.raises(ModelSpaceError):
        build_basis(THETA, gram_tol=1e-30)
