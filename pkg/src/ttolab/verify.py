"""Cross-module invariant suites behind the `verify` subcommand.

Each suite draws its own deterministic random stream, exercises one
structural identity on a handful of fresh instances, and reports the
worst deviation against its tolerance.  The suites are smoke-level by
design; the large sweeps live in the acceptance tests.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct
from .clark import (clark_measure, clark_reconstruct, clark_unitary,
                    commutator_route_defect, cross_route_equivalence,
                    expected_mass, hilbert_route_defect,
                    hilbert_transform_matrix, poisson_identity_defect)
from .config import RunConfig
from .corpus import (random_blaschke, random_conjugate_square_symbol,
                     random_interior_points, random_trig_poly,
                     random_unimodular, random_zero_hankel_symbol, spawn_rngs)
from .harmonic import boundary_norm, inner_product
from .modelspace import build_basis, conjugate_kernel, reproducing_kernel
from .nehari import NehariError, nehari_gap
from .spectra import matched_distance
from .truncops import (hankel_matrix, hankel_toeplitz_defect, rank_one_matrix,
                       rank_one_symbol, standard_symbol, toeplitz_matrix,
                       zero_symbol_test)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    checks: int
    detail: str
    seconds: float

    def row(self) -> dict:
        # timing is excluded: reports must be byte-identical across reruns
        return {"name": self.name, "passed": self.passed, "worst": self.worst,
                "tolerance": self.tolerance, "checks": self.checks,
                "detail": self.detail}


def _suite_basis(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (1, 2, 3, 4, 5):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad, config.tolerances.identity)
        worst = max(worst, basis.gram_defect)
        n += 1
    return worst, n, "Takenaka-Malmquist Gram matrix vs identity"


def _suite_kernels(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (2, 3, 4):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        coeffs = rng.standard_normal(degree) + 1j * rng.standard_normal(degree)
        f = basis.combination(coeffs)
        for lam in random_interior_points(rng, 3, 0.8):
            kern = reproducing_kernel(theta, lam)
            val = inner_product(f, kern, quad)
            worst = max(worst, abs(val - complex(f(lam))))
            worst = max(worst, abs(boundary_norm(kern, quad) - kern.norm()))
            ck = conjugate_kernel(theta, lam)
            worst = max(worst, abs(boundary_norm(ck, quad) - ck.norm()))
            n += 3
    return worst, n, "reproducing property and kernel norm formulas"


def _suite_toeplitz_algebra(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (2, 3, 4):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        f = random_trig_poly(rng, 2, analytic=True)
        g = random_trig_poly(rng, 2, analytic=True)
        lhs = toeplitz_matrix(f * g, basis, quad)
        rhs = toeplitz_matrix(f, basis, quad) @ toeplitz_matrix(g, basis, quad)
        worst = max(worst, float(np.max(np.abs(lhs.entries - rhs.entries))))
        n += 1
    return worst, n, "multiplicativity of compressions of analytic symbols"


def _suite_link(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (1, 2, 3, 4):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        phi = random_trig_poly(rng, 3)
        worst = max(worst, hankel_toeplitz_defect(phi, basis, quad))
        n += 1
    return worst, n, "Hankel matrix vs conjugate-multiplied Toeplitz route"


def _suite_rank_one(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (2, 3):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        for lam in random_interior_points(rng, 2, 0.8):
            direct = toeplitz_matrix(rank_one_symbol(theta, lam), basis, quad)
            outer = rank_one_matrix(lam, basis)
            worst = max(worst, float(np.max(np.abs(direct.entries
                                                   - outer.entries))))
            ck = conjugate_kernel(theta, lam)
            t_lam = complex(theta(lam))
            target = (1.0 - abs(t_lam) ** 2) / (1.0 - abs(lam) ** 2)
            worst = max(worst, abs(ck.norm() ** 2 - target))
            n += 2
    return worst, n, "rank-one compression vs kernel outer product"


def _suite_clark_poisson(config: RunConfig, rng) -> tuple:
    worst, n = 0.0, 0
    for degree in (1, 3, 5):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        alpha = random_unimodular(rng)
        measure = clark_measure(theta, alpha)
        pts = random_interior_points(rng, 25, 0.9)
        worst = max(worst, poisson_identity_defect(measure, theta, pts))
        worst = max(worst, abs(measure.mass - expected_mass(theta, alpha)))
        n += 2
    return worst, n, "Herglotz transform vs atomic Poisson sums and mass"


def _suite_clark_embedding(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (2, 4):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        alpha = random_unimodular(rng)
        unitary = clark_unitary(basis, clark_measure(theta, alpha))
        worst = max(worst, unitary.unitarity_defect())
        coeffs = rng.standard_normal(degree) + 1j * rng.standard_normal(degree)
        f = basis.combination(coeffs)
        traces = unitary.matrix.entries @ coeffs
        weights = np.asarray(unitary.measure.weights)
        pts = random_interior_points(rng, 20, 0.9)
        rebuilt = clark_reconstruct(unitary.measure, theta,
                                    traces / np.sqrt(weights), pts)
        worst = max(worst, float(np.max(np.abs(rebuilt - f(pts)))))
        n += 2
    return worst, n, "boundary-trace unitarity and interior reconstruction"


def _suite_hilbert_kernel(config: RunConfig, rng) -> tuple:
    worst, n = 0.0, 0
    for degree in (2, 3, 4):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, config.quadrature.settings())
        alpha = random_unimodular(rng)
        plus = clark_measure(theta, alpha)
        minus = clark_measure(theta, -alpha)
        h = hilbert_transform_matrix(plus, minus).entries
        eye = h.conj().T @ h
        worst = max(worst, float(np.max(np.abs(eye - np.eye(degree)))))
        worst = max(worst, hilbert_route_defect(basis, plus, minus))
        n += 2
    return worst, n, "atomic Hilbert kernel unitarity and unitary factorization"


def _suite_cross_route(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (1, 2, 3):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        alpha = random_unimodular(rng)
        phi = random_conjugate_square_symbol(rng, theta, quad)
        report = cross_route_equivalence(phi, basis, alpha, quad)
        worst = max(worst, report.deviation, report.singular_gap,
                    report.embedding_defect)
        worst = max(worst, commutator_route_defect(phi, clark_measure(theta, alpha),
                                                   clark_measure(theta, -alpha)))
        n += 4
    return worst, n, "quadrature route vs atomic commutator route"


def _suite_spectral_mapping(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (2, 3, 4):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        phi = random_trig_poly(rng, 3, analytic=True)
        eigs = np.linalg.eigvals(toeplitz_matrix(phi, basis, quad).entries)
        targets = np.asarray(phi(np.asarray(theta.zeros)), dtype=complex)
        worst = max(worst, matched_distance(eigs, targets))
        n += 1
    return worst, n, "eigenvalues of analytic compressions vs symbol at zeros"


def _suite_standard_symbol(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (1, 2, 3):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        basis = build_basis(theta, quad)
        dead = random_zero_hankel_symbol(rng, theta, band=2)
        _, norm = zero_symbol_test(dead, basis, config.tolerances.identity,
                                   quad)
        worst = max(worst, norm)
        phi = random_trig_poly(rng, 3)
        std = standard_symbol(phi, theta, quad)
        diff = (hankel_matrix(phi, basis, quad).entries
                - hankel_matrix(std.symbol, basis, quad).entries)
        worst = max(worst, float(np.linalg.norm(diff, 2)))
        n += 2
    return worst, n, "zero-symbol annihilation and standard representatives"


def _suite_nehari(config: RunConfig, rng) -> tuple:
    quad = config.quadrature.settings()
    worst, n = 0.0, 0
    for degree in (1, 2):
        theta = random_blaschke(rng, degree, config.sweep.max_zero_modulus,
                                config.sweep.min_zero_gap)
        phi = random_trig_poly(rng, 2)
        try:
            gap = nehari_gap(phi, theta, multistart=12,
                             seed=int(rng.integers(1 << 31)),
                             grid_m=2048, quad=quad,
                             slack=config.tolerances.nehari_slack)
        except NehariError as exc:
            raise AssertionError(str(exc)) from exc
        worst = max(worst, max(gap.hankel_norm - gap.dual.value, 0.0))
        n += 1
    return worst, n, "operator norm below dual distance estimate"


_SUITES = [
    ("basis-orthonormality", _suite_basis, "identity"),
    ("kernel-reproducing", _suite_kernels, "identity"),
    ("toeplitz-analytic-multiplicativity", _suite_toeplitz_algebra, "identity"),
    ("hankel-toeplitz-link", _suite_link, "identity"),
    ("rank-one-identity", _suite_rank_one, "identity"),
    ("clark-poisson", _suite_clark_poisson, "spectral"),
    ("clark-embedding", _suite_clark_embedding, "spectral"),
    ("hilbert-kernel-route", _suite_hilbert_kernel, "identity"),
    ("cross-route-hankel", _suite_cross_route, "spectral"),
    ("spectral-mapping", _suite_spectral_mapping, "spectral"),
    ("standard-symbol", _suite_standard_symbol, "identity"),
    ("nehari-bound", _suite_nehari, "nehari_slack"),
]


@dataclass
class VerificationReport:
    seed: int
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "passed": self.passed,
                "suites": [r.row() for r in self.results]}


def suite_names():
    return [name for name, _, _ in _SUITES]


def run_verification(config: RunConfig, only=None) -> VerificationReport:
    chosen = [(n, f, t) for n, f, t in _SUITES if only is None or n in only]
    rngs = spawn_rngs(config.sweep.seed, [n for n, _, _ in chosen])
    results = []
    for name, func, tol_name in chosen:
        tol = getattr(config.tolerances, tol_name)
        start = time.perf_counter()
        try:
            worst, checks, detail = func(config, rngs[name])
            passed = worst <= tol
        except Exception as exc:   # deliberate: a crash is a suite failure
            worst, checks = float("inf"), 0
            detail = f"error: {exc}"
            passed = False
        results.append(SuiteResult(name, passed, float(worst), tol, checks,
                                   detail, time.perf_counter() - start))
    return VerificationReport(config.sweep.seed, results)
