"""Distance from a boundary symbol to the zero-symbol class.

The class F of symbols whose truncated Hankel operator vanishes is
conj(Theta H^2) + H^2 (intersected with L^inf) for the appropriate inner
function Theta, and the L^inf distance to it dualizes against the unit
ball of K_Theta ∩ zH^1.  At finite degree that dual space is the
(d-1)-dimensional K_Theta ∩ zH^2, so the distance becomes a concrete
maximization over coefficient vectors:

    dist(phi, F_Theta) = sup { |∫ phi h dm| : h in K_Theta ∩ zH^2,
                               ||h||_{L^1} <= 1 }.

The ratio |∫ phi h| / ||h||_1 is maximized by projected gradient ascent
with multi-start (the objective is smooth away from sign changes of h
and scale-invariant); every evaluated point certifies a lower bound, so
the reported value is labeled an estimate with a certified-lower-bound
meaning.  A Lawson-style iteratively reweighted least squares pass
produces primal certificates f = f1 + conj(Theta f2) for the upper
side, and the Poisson convolution table smooths those certificates
toward continuous near-minimizers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct
from .harmonic import (DEFAULT_QUADRATURE, QuadratureSettings, Symbol,
                       TrigPoly, adaptive_boundary_mean, unit_nodes)
from .modelspace import (BasisCombination, ModelSpaceBasis, build_basis,
                         vanishing_at_origin_subspace)
from .truncops import hankel_matrix


class NehariError(Exception):
    """Lower-bound inequality violated: optimizer or quadrature bug."""


@dataclass(frozen=True)
class DualBasis:
    """L2-orthonormal basis of K_Theta ∩ zH^2 (dimension d - 1)."""

    basis: ModelSpaceBasis
    coeffs: np.ndarray          # (d, d-1), orthonormal columns

    @property
    def dimension(self) -> int:
        return self.coeffs.shape[1]

    def sample(self, nodes: np.ndarray) -> np.ndarray:
        return self.coeffs.T @ self.basis.sample(nodes)

    def element(self, c: np.ndarray) -> Symbol:
        return BasisCombination(self.basis.theta.zeros,
                                self.coeffs @ np.asarray(c, dtype=complex))


def dual_basis(theta: BlaschkeProduct,
               quad: QuadratureSettings = DEFAULT_QUADRATURE) -> DualBasis:
    basis = build_basis(theta, quad)
    return DualBasis(basis, vanishing_at_origin_subspace(basis))


@dataclass(frozen=True)
class DistanceReport:
    """Best dual value found, with the optimizer that achieved it."""

    value: float                # certified lower bound on the distance
    coefficients: np.ndarray    # dual-basis coefficients of the maximizer
    pairing: np.ndarray         # ∫ phi h_i dm against the dual basis
    grid_value: float           # objective on the optimization grid
    grid_m: int
    starts: int
    stagnant_starts: int        # starts that failed to move off their seed


def _objective(c, q, samples):
    h = c @ samples
    den = float(np.mean(np.abs(h)))
    if den <= 0.0:
        return 0.0
    return float(abs(c @ q) / den)


def _ascend(c, q, samples, max_iter=200):
    """Projected gradient ascent on |c.q| / mean|c@samples| (scale-free)."""
    m = samples.shape[1]
    c = c / max(float(np.linalg.norm(c)), 1e-300)
    val = _objective(c, q, samples)
    step = 0.5
    moved = False
    for _ in range(max_iter):
        ell = c @ q
        h = c @ samples
        ah = np.maximum(np.abs(h), 1e-300)
        den = float(ah.mean())
        num = max(abs(ell), 1e-300)
        grad_num = (ell / num) * np.conj(q)
        grad_den = (samples.conj() @ (h / ah)) / m
        grad = (grad_num * den - num * grad_den) / den**2
        gnorm = np.linalg.norm(grad)
        if gnorm <= 1e-15 * max(1.0, val):
            break
        improved = False
        while step > 1e-14:
            cand = c + step * grad
            cand = cand / max(float(np.linalg.norm(cand)), 1e-300)
            cand_val = _objective(cand, q, samples)
            if cand_val > val + 1e-15:
                c, val = cand, cand_val
                step = min(step * 1.5, 10.0)
                improved = True
                moved = True
                break
            step *= 0.5
        if not improved:
            break
    return c, val, moved


def dual_distance(phi: Symbol, theta: BlaschkeProduct, multistart: int = 64,
                  seed: int = 20250815, grid_m: int = 4096,
                  quad: QuadratureSettings = DEFAULT_QUADRATURE,
                  warm_starts=()) -> DistanceReport:
    """Estimate dist(phi, F_theta) by the dual extremal problem.

    Every candidate h yields the rigorous lower bound |∫ phi h| / ||h||_1,
    so the maximum over all visited candidates is reported: an estimate
    from below, exact when the ascent finds the global maximizer.  The
    final value re-evaluates the winner's L1 norm by adaptive quadrature
    rather than trusting the optimization grid.
    """
    if theta.degree < 2:
        empty = np.zeros(0, dtype=complex)
        return DistanceReport(0.0, empty, empty, 0.0, grid_m, 0, 0)
    dual = dual_basis(theta, quad)

    def pairing_sample(nodes):
        return phi(nodes)[None, :] * dual.sample(nodes)

    q, _ = adaptive_boundary_mean(pairing_sample, quad,
                                  m_start=dual.basis.m_hint)
    q = np.asarray(q, dtype=complex).ravel()
    if float(np.linalg.norm(q)) < 1e-14:
        zero = np.zeros(dual.dimension, dtype=complex)
        return DistanceReport(0.0, zero, q, 0.0, grid_m, 0, 0)

    samples = dual.sample(unit_nodes(grid_m))
    rng = np.random.default_rng(seed)
    starts = [np.conj(q)]
    starts.extend(np.asarray(w, dtype=complex) for w in warm_starts)
    while len(starts) < max(multistart, 1):
        starts.append(rng.standard_normal(dual.dimension)
                      + 1j * rng.standard_normal(dual.dimension))

    best_c, best_val = None, -1.0
    stagnant = 0
    for c0 in starts:
        c, val, moved = _ascend(np.asarray(c0, dtype=complex), q, samples)
        if not moved:
            stagnant += 1
        if val > best_val:
            best_c, best_val = c, val
    # polish the winner with shrinking random restarts around it
    for sigma in (0.3, 0.1, 0.03, 0.01):
        for _ in range(4):
            noise = (rng.standard_normal(dual.dimension)
                     + 1j * rng.standard_normal(dual.dimension))
            c, val, _ = _ascend(best_c + sigma * noise, q, samples)
            if val > best_val:
                best_c, best_val = c, val

    # honest final value: exact pairing, adaptively integrated L1 norm
    h_best = dual.element(best_c)
    relaxed = QuadratureSettings(quad.m_init, quad.m_cap,
                                 max(quad.tol, 1e-9))

    def abs_sample(nodes):
        return np.abs(h_best(nodes))

    l1, _ = adaptive_boundary_mean(abs_sample, relaxed,
                                   m_start=dual.basis.m_hint)
    l1 = float(np.real(l1))
    value = float(abs(best_c @ q) / l1) if l1 > 0.0 else 0.0
    return DistanceReport(value, best_c, q, best_val, grid_m,
                          len(starts), stagnant)


@dataclass(frozen=True)
class GapReport:
    """Hankel norm vs. dual distance for the squared inner function."""

    hankel_norm: float
    dual: DistanceReport
    ratio: float | None         # dual / hankel, empirical constant candidate

    @property
    def dual_value(self) -> float:
        return self.dual.value


def nehari_gap(phi: Symbol, theta: BlaschkeProduct, multistart: int = 64,
               seed: int = 20250815, grid_m: int = 4096,
               quad: QuadratureSettings = DEFAULT_QUADRATURE,
               slack: float = 1e-6) -> GapReport:
    """Check ||Gamma_phi|| <= dist(phi, F_{theta^2}) and report the ratio.

    The top singular pair (u, v) of the Hankel matrix supplies the dual
    element z * f_v * g_u, whose pairing with phi equals the operator
    norm; it is passed to the optimizer as a warm start, making the
    lower-bound inequality hold by construction up to quadrature error.
    A violation beyond the slack is a genuine bug, hence an exception.
    """
    basis = build_basis(theta, quad)
    gamma = hankel_matrix(phi, basis, quad)
    norm = gamma.norm()

    warm = []
    square = theta.square()
    if theta.degree >= 1 and norm > 1e-13:
        u, s, vh = np.linalg.svd(gamma.entries)
        grid = unit_nodes(grid_m)
        f_vals = np.conj(vh[0]) @ basis.sample(grid)     # top right vector
        g_vals = np.conj(u[:, 0]) @ basis.sample(grid)   # top left vector
        h_vals = grid * f_vals * g_vals                  # z f g on the grid
        dual = dual_basis(square, quad)
        coeffs, *_ = np.linalg.lstsq(dual.sample(grid).T, h_vals, rcond=None)
        warm.append(coeffs)

    report = dual_distance(phi, square, multistart, seed, grid_m, quad,
                           warm_starts=warm)
    if norm > report.value + slack:
        raise NehariError(
            f"operator norm {norm:.12g} exceeds dual distance estimate "
            f"{report.value:.12g} beyond slack {slack:g}")
    ratio = report.value / norm if norm > slack else None
    return GapReport(norm, report, ratio)


@dataclass(frozen=True)
class MinimaxCertificate:
    """Primal certificate f = f1 + conj(Theta f2) with its grid sup-norm."""

    value: float
    f1: TrigPoly
    f2: TrigPoly
    band: int
    grid_m: int
    iterations: int


def minimax_certificate(phi: Symbol, theta: BlaschkeProduct,
                        band: int | None = None, grid_m: int = 4096,
                        max_iter: int = 200) -> MinimaxCertificate:
    """Near-minimax approximation of phi from F_theta on a grid.

    Lawson's iteratively reweighted least squares drives the weighted L2
    solutions toward the Chebyshev minimizer over the span of z^k and
    conj(theta z^k), 0 <= k <= band.  The returned sup-norm is a grid
    sup, hence a (slightly optimistic) upper-bound certificate whose
    resolution is reported.
    """
    if band is None:
        band = theta.degree + 8
        if isinstance(phi, TrigPoly) and phi.coeffs:
            band = max(band, max(abs(k) for k in phi.coeffs) + theta.degree)
    nodes = unit_nodes(grid_m)
    target = np.asarray(phi(nodes), dtype=complex)
    powers = nodes[None, :] ** np.arange(band + 1)[:, None]
    columns = [powers[k] for k in range(band + 1)]
    tvals = np.asarray(theta(nodes), dtype=complex)
    columns.extend(np.conj(tvals * powers[k]) for k in range(band + 1))
    a = np.stack(columns, axis=1)

    w = np.full(grid_m, 1.0 / grid_m)
    best_val, best_x = np.inf, np.zeros(a.shape[1], dtype=complex)
    it = 0
    for it in range(1, max_iter + 1):
        sw = np.sqrt(w)[:, None]
        x, *_ = np.linalg.lstsq(a * sw, target * sw.ravel(), rcond=None)
        resid = np.abs(target - a @ x)
        val = float(resid.max())
        if val < best_val - 1e-15:
            best_val, best_x = val, x
        w = w * resid
        total = float(w.sum())
        if total <= 0.0:
            break       # exact fit
        w /= total
    if not np.isfinite(best_val):
        best_val, best_x = 0.0, np.zeros(a.shape[1], dtype=complex)
    f1 = TrigPoly({k: best_x[k] for k in range(band + 1)
                   if abs(best_x[k]) > 0.0})
    f2 = TrigPoly({k: best_x[band + 1 + k] for k in range(band + 1)
                   if abs(best_x[band + 1 + k]) > 0.0})
    return MinimaxCertificate(best_val, f1, f2, band, grid_m, it)


@dataclass(frozen=True)
class ConvolutionRow:
    r: float
    sup_gap: float              # grid sup of |phi - (f1(rz) + conj(theta f2(rz)))|
    theta_gap: float            # grid sup of |theta(z) - theta(rz)|


def convolution_table(phi: Symbol, theta: BlaschkeProduct, r_list,
                      certificate: MinimaxCertificate | None = None,
                      grid_m: int = 4096):
    """Poisson-smoothed certificates: the sup-norm trend as r -> 1.

    Analytic functions convolve with the Poisson kernel by evaluation at
    rz, so the smoothed competitor is f1(rz) + conj(theta(z) f2(rz));
    its distance to phi decreases toward the minimax value while staying
    an upper bound for the distance to the continuous part of F_theta.
    """
    cert = certificate or minimax_certificate(phi, theta, grid_m=grid_m)
    nodes = unit_nodes(grid_m)
    target = np.asarray(phi(nodes), dtype=complex)
    tvals = np.asarray(theta(nodes), dtype=complex)
    rows = []
    for r in r_list:
        r = float(r)
        if not 0.0 < r < 1.0:
            raise ValueError("convolution radius must lie in (0, 1)")
        smooth = cert.f1(r * nodes) + np.conj(tvals * cert.f2(r * nodes))
        sup_gap = float(np.max(np.abs(target - smooth)))
        theta_gap = float(np.max(np.abs(tvals - theta(r * nodes))))
        rows.append(ConvolutionRow(r, sup_gap, theta_gap))
    return rows
