import numpy as np
import pytest

from ttolab.blaschke import BlaschkeProduct
from ttolab.corpus import random_zero_hankel_symbol
from ttolab.harmonic import TrigPoly, boundary_mean, inner_product, unit_nodes
from ttolab.nehari import (
    NehariError,
    convolution_table,
    dual_basis,
    dual_distance,
    minimax_certificate,
    nehari_gap,
)


def test_dual_basis_spans_vanishing_part():
    # for theta = z^4 the trial space is span{z, z^2, z^3}
    dual = dual_basis(BlaschkeProduct([0, 0, 0, 0]))
    assert dual.coeffs.shape == (4, 3)
    for j in range(3):
        h = dual.element(np.eye(3)[j])
        assert abs(boundary_mean(h)) < 1e-12          # vanishes at the origin
        assert abs(inner_product(h, h) - 1.0) < 1e-10


def test_unit_distance_for_conjugate_monomial():
    # dist(zbar, analytic + conj(z^2 H^2)) = 1, attained by h = z
    report = dual_distance(TrigPoly({-1: 1.0}), BlaschkeProduct([0, 0]),
                           multistart=8, grid_m=1024)
    assert abs(report.value - 1.0) < 1e-8


def test_distance_vanishes_inside_the_space():
    # phi = z^3 already lies in the competitor class
    report = dual_distance(TrigPoly({3: 1.0}), BlaschkeProduct([0, 0]),
                           multistart=8, grid_m=1024)
    assert report.value < 1e-10


def test_degenerate_degree_one_dual_space():
    # K_{z} has no member vanishing at 0 except 0; distance collapses
    report = dual_distance(TrigPoly({-1: 1.0}), BlaschkeProduct([0]))
    assert report.value == 0.0


def test_gap_triple_for_shift_symbol():
    gap = nehari_gap(TrigPoly({-1: 1.0}), BlaschkeProduct([0]),
                     multistart=8, grid_m=1024)
    assert abs(gap.hankel_norm - 1.0) < 1e-12
    assert abs(gap.dual.value - 1.0) < 1e-8
    assert abs(gap.ratio - 1.0) < 1e-8


def test_gap_lower_bound_holds(rng):
    theta = BlaschkeProduct([0.3, -0.5j])
    phi = TrigPoly({-3: 1.0, -1: 0.5j, 2: 1.0})
    gap = nehari_gap(phi, theta, multistart=12, grid_m=2048)
    assert gap.hankel_norm <= gap.dual.value + 1e-6
    assert gap.ratio >= 1.0 - 1e-6


def test_gap_zero_hankel_symbol(rng):
    theta = BlaschkeProduct([0.4])
    phi = random_zero_hankel_symbol(rng, theta)
    gap = nehari_gap(phi, theta, multistart=8, grid_m=1024)
    assert gap.hankel_norm < 1e-10
    assert gap.ratio is None


def test_minimax_certificate_bounds_distance():
    # primal upper bound must dominate the dual lower bound
    phi = TrigPoly({-1: 1.0})
    theta2 = BlaschkeProduct([0, 0])
    cert = minimax_certificate(phi, theta2, grid_m=2048)
    dual = dual_distance(phi, theta2, multistart=8, grid_m=1024)
    assert cert.value >= dual.value - 1e-6
    assert abs(cert.value - 1.0) < 0.02   # certified near-optimal here


def test_certificate_exact_when_phi_in_class():
    phi = TrigPoly({1: 2.0, 0: -1.0})
    cert = minimax_certificate(phi, BlaschkeProduct([0, 0]), grid_m=1024)
    assert cert.value < 1e-10


def test_convolution_table_trend():
    phi = TrigPoly({-1: 1.0})
    theta2 = BlaschkeProduct([0, 0])
    cert = minimax_certificate(phi, theta2, grid_m=2048)
    rows = convolution_table(phi, theta2, [0.5, 0.9, 0.99, 0.999],
                             certificate=cert, grid_m=2048)
    gaps = [row.sup_gap for row in rows]
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
    # smoothing artifacts vanish as r -> 1
    assert rows[-1].theta_gap < 0.01
    assert gaps[-1] < cert.value * 1.02 + 1e-9


def test_convolution_radius_validated():
    with pytest.raises(ValueError):
        convolution_table(TrigPoly({-1: 1.0}), BlaschkeProduct([0, 0]), [1.5])
