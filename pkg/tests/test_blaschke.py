import numpy as np
import pytest

from ttolab.blaschke import BlaschkeProduct, boundary_zero_closure, sublevel_connectivity
from ttolab.harmonic import unit_nodes


def test_unimodular_on_boundary():
    theta = BlaschkeProduct([0.3, -0.5j, 0.1 + 0.6j])
    nodes = unit_nodes(64)
    assert np.allclose(np.abs(theta(nodes)), 1.0, atol=1e-12)


def test_contractive_inside(rng):
    theta = BlaschkeProduct([0.4, -0.2 + 0.3j])
    z = 0.9 * (rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20))
    z = z[np.abs(z) < 0.9]
    assert np.all(np.abs(theta(z)) < 1.0)


def test_zeros_and_degree():
    zeros = [0.2, 0.2, -0.7j]
    theta = BlaschkeProduct(zeros)
    assert theta.degree == 3
    assert np.allclose(np.abs(theta(np.array(zeros))), 0.0, atol=1e-14)


def test_monomial_case():
    theta = BlaschkeProduct([0, 0, 0])
    z = 0.3 + 0.1j
    assert abs(theta(z) - z**3) < 1e-15


def test_rejects_zero_outside_disk():
    with pytest.raises(ValueError):
        BlaschkeProduct([1.2])


def test_derivative_matches_finite_difference():
    theta = BlaschkeProduct([0.5, -0.3 + 0.2j])
    z = 0.4 - 0.1j
    h = 1e-6
    fd = (theta(z + h) - theta(z - h)) / (2 * h)
    assert abs(theta.derivative(z) - fd) < 1e-8


def test_boundary_derivative_modulus_monomial():
    theta = BlaschkeProduct([0, 0, 0, 0])
    nodes = unit_nodes(16)
    assert np.allclose(theta.boundary_derivative_modulus(nodes), 4.0)


def test_square_doubles_zeros():
    theta = BlaschkeProduct([0.3, -0.5])
    sq = theta.square()
    assert sq.degree == 4
    z = 0.2 + 0.2j
    assert abs(sq(z) - theta(z) ** 2) < 1e-14


def test_json_roundtrip():
    theta = BlaschkeProduct([0.3 + 0.1j, -0.2], gamma=np.exp(0.7j))
    back = BlaschkeProduct.from_json(theta.to_json())
    z = 0.5j
    assert abs(theta(z) - back(z)) < 1e-15


def test_boundary_zero_closure_single_cluster():
    zeros = [1 - 2.0**-n for n in range(2, 12)]
    closure = boundary_zero_closure(zeros)
    assert len(closure) == 1
    assert abs(closure[0] - 1.0) < 1e-6


def test_boundary_zero_closure_ignores_deep_zeros():
    closure = boundary_zero_closure([0.1, -0.3j, 0.5])
    assert len(closure) == 0


def test_boundary_zero_closure_two_clusters():
    zeros = [0.95, 0.97, -0.96j, -0.98j]
    closure = boundary_zero_closure(zeros)
    assert len(closure) == 2
    angles = sorted(np.mod(np.angle(closure), 2 * np.pi))
    assert abs(angles[0] - 0.0) < 0.05
    assert abs(angles[1] - 1.5 * np.pi) < 0.05


def test_sublevel_connected_for_monomial():
    theta = BlaschkeProduct([0, 0])
    report = sublevel_connectivity(theta, 0.5)
    assert report.verdict == "connected"
    assert report.components == 1


def test_sublevel_disconnects_for_separated_zeros():
    theta = BlaschkeProduct([0.8, -0.8])
    report = sublevel_connectivity(theta, 0.05)
    assert report.verdict == "disconnected"
    assert report.components == 2
