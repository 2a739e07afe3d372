"""Clark measures, Clark unitaries, and the atomic route to Hankel matrices.

For a degree-d Blaschke product theta and a unimodular anchor alpha, the
level set {theta = alpha} on the circle consists of exactly d points (the
boundary phase increases strictly and winds d times).  The Clark measure
places weight 1/|theta'| at each of them; the induced embedding of the
model space into L2 of that measure is unitary.  Combining the
embeddings at alpha and -alpha yields a unitary Hilbert transform with
an explicit Cauchy-type kernel, and a commutator construction that
reproduces truncated Hankel operators without any boundary quadrature.
Keeping this route free of the quadrature code is the point: agreement
of the two pipelines is the strongest end-to-end check in the package.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct
from .harmonic import TWO_PI, QuadratureSettings, Symbol
from .modelspace import ModelSpaceBasis
from .truncops import OperatorMatrix, hankel_matrix


class ClarkError(RuntimeError):
    """Root finding or measure assembly failed."""


@dataclass(frozen=True)
class ClarkMeasure:
    """Atomic measure with unit-circle atoms and positive weights."""

    alpha: complex
    atoms: np.ndarray    # unit-modulus positions, sorted by angle
    weights: np.ndarray  # 1 / |theta'| at each atom

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def space_tag(self) -> str:
        return f"L2[a={self.alpha.real:.12g}{self.alpha.imag:+.12g}j;n={len(self.atoms)}]"

    def to_dict(self) -> dict:
        return {
            "alpha": {"re": self.alpha.real, "im": self.alpha.imag},
            "atoms": [
                {"xi": {"re": x.real, "im": x.imag}, "w": float(w)}
                for x, w in zip(self.atoms, self.weights)
            ],
        }


def _phase_targets(theta: BlaschkeProduct, alpha: complex, n: int):
    """Grid arguments of theta * conj(alpha) for crossing detection."""
    t = TWO_PI * np.arange(n) / n
    vals = theta(np.exp(1j * t)) * np.conj(alpha)
    return t, np.angle(vals)


def clark_measure(theta: BlaschkeProduct, alpha: complex,
                  phase_tol: float = 1e-14) -> ClarkMeasure:
    """Solve theta(xi) = alpha on the circle and attach weights 1/|theta'|.

    The boundary phase of theta is strictly increasing, so each of the d
    solutions is isolated; they are bracketed on a grid fine enough that
    the phase moves less than pi per cell, then polished by Newton steps
    on the principal argument (the phase derivative is |theta'| > 0).
    """
    d = theta.degree
    if d == 0:
        raise ClarkError("constant products carry no Clark measure")
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-9:
        raise ClarkError("anchor must be unimodular")
    alpha /= abs(alpha)

    speed_cap = sum((1.0 + abs(l)) / (1.0 - abs(l)) for l in theta.zeros)
    n = 512
    while n < 8 * speed_cap or n < 16 * d:
        n *= 2

    for _ in range(6):
        t, args = _phase_targets(theta, alpha, n)
        nxt = np.roll(args, -1)
        crossing = (args <= 0.0) & (nxt > 0.0)
        idx = np.nonzero(crossing)[0]
        if len(idx) == d:
            break
        n *= 2  # brackets were too coarse (phase jumped past a crossing)
    else:
        raise ClarkError(f"found {len(idx)} phase crossings, expected {d}")

    step = TWO_PI / n
    roots = np.empty(d)
    for out, j in enumerate(idx):
        a0, a1 = args[j], args[(j + 1) % n]
        lo, hi = t[j], t[j] + step
        # linear interpolation start, then Newton on the principal argument,
        # bisecting whenever a step would leave the bracket
        tt = lo + step * (-a0) / (a1 - a0)
        for _ in range(80):
            err = float(np.angle(theta(np.exp(1j * tt)) * np.conj(alpha)))
            if abs(err) <= phase_tol:
                break
            if err > 0.0:
                hi = tt
            else:
                lo = tt
            speed = float(theta.boundary_derivative_modulus(np.exp(1j * tt)))
            proposal = tt - err / speed
            tt = proposal if lo < proposal < hi else 0.5 * (lo + hi)
        roots[out] = tt % TWO_PI

    order = np.argsort(roots)
    atoms = np.exp(1j * roots[order])
    weights = 1.0 / theta.boundary_derivative_modulus(atoms)
    return ClarkMeasure(alpha, atoms, weights)


def expected_mass(theta: BlaschkeProduct, alpha: complex) -> float:
    """Total mass from the Herglotz transform at the origin."""
    t0 = complex(theta(0.0))
    return float(np.real((alpha + t0) / (alpha - t0)))


def poisson_identity_defect(measure: ClarkMeasure, theta: BlaschkeProduct,
                            points) -> float:
    """Largest residual of the defining Poisson identity at interior points:
    Re[(alpha + theta(z)) / (alpha - theta(z))] = sum_j w_j P_z(xi_j)."""
    points = np.asarray(points, dtype=complex).ravel()
    herglotz = np.real((measure.alpha + theta(points)) / (measure.alpha - theta(points)))
    kern = (1.0 - np.abs(points)[:, None] ** 2) / \
        np.abs(1.0 - np.conj(measure.atoms)[None, :] * points[:, None]) ** 2
    atomic = kern @ measure.weights
    return float(np.max(np.abs(herglotz - atomic)))


def square_clark_measure(theta: BlaschkeProduct, alpha: complex) -> ClarkMeasure:
    """Clark measure of theta^2 at alpha^2, assembled from the measures of
    theta at alpha and -alpha with halved weights."""
    plus = clark_measure(theta, alpha)
    minus = clark_measure(theta, -complex(alpha))
    atoms = np.concatenate([plus.atoms, minus.atoms])
    weights = 0.5 * np.concatenate([plus.weights, minus.weights])
    angles = np.mod(np.angle(atoms), TWO_PI)
    order = np.argsort(angles)
    atoms, weights, angles = atoms[order], weights[order], angles[order]
    if len(atoms) > 1:
        gaps = np.diff(angles, append=angles[0] + TWO_PI)
        if float(np.min(gaps)) < 1e-10:
            raise ClarkError("atoms of the two half measures collide")
    return ClarkMeasure(complex(alpha) ** 2, atoms, weights)


# ---------------------------------------------------------------------------
# Unitaries between the model space and the atomic L2 spaces
# ---------------------------------------------------------------------------


@dataclass
class ClarkUnitary:
    """Coordinate unitary of the model space onto L2 of a Clark measure.

    Row j of the matrix is sqrt(w_j) times the basis sampled at atom j,
    i.e. coordinates are boundary traces scaled to make the atomic space
    a standard l2.
    """

    matrix: OperatorMatrix
    measure: ClarkMeasure

    def unitarity_defect(self) -> float:
        v = self.matrix.entries
        eye = np.eye(v.shape[1])
        return float(np.max(np.abs(v.conj().T @ v - eye)))


def clark_unitary(basis: ModelSpaceBasis, measure: ClarkMeasure) -> ClarkUnitary:
    samples = basis.sample(measure.atoms)  # (d, n_atoms)
    entries = np.sqrt(measure.weights)[:, None] * samples.T
    op = OperatorMatrix(entries, basis.space_tag(), measure.space_tag(),
                        "clark-embedding")
    return ClarkUnitary(op, measure)


def conjugate_clark_unitary(basis: ModelSpaceBasis, measure: ClarkMeasure) -> ClarkUnitary:
    """Embedding of the Hankel codomain conj(z * K) into L2 of a measure.

    The basis vector conj(z e_k) restricts to the trace
    zeta -> conj(zeta e_k(zeta)); rows carry the usual sqrt-weight.
    """
    samples = basis.sample(measure.atoms)  # (d, n_atoms)
    traces = np.conj(measure.atoms[None, :] * samples)
    entries = np.sqrt(measure.weights)[:, None] * traces.T
    op = OperatorMatrix(entries, basis.conjugate_space_tag(), measure.space_tag(),
                        "clark-embedding-conjugate")
    return ClarkUnitary(op, measure)


def clark_reconstruct(measure: ClarkMeasure, theta: BlaschkeProduct,
                      atom_values, z):
    """Interior values of the model-space function with the given boundary
    traces on the atoms:
    F(z) = sum_j w_j f(xi_j) (1 - conj(alpha) theta(z)) / (1 - conj(xi_j) z)."""
    z = np.asarray(z, dtype=complex)
    vals = np.asarray(atom_values, dtype=complex)
    front = 1.0 - np.conj(measure.alpha) * theta(z)
    cauchy = 1.0 / (1.0 - np.conj(measure.atoms) * z[..., None])
    return front * (cauchy @ (measure.weights * vals))


def hilbert_transform_matrix(plus: ClarkMeasure, minus: ClarkMeasure) -> OperatorMatrix:
    """Unitary Hilbert transform between the two atomic spaces, from its
    closed-form kernel: entry (j, k) = 2 sqrt(w_k^+ w_j^-) / (1 - conj(xi_k) zeta_j).

    Equals the composition (embedding at -alpha) o (embedding at alpha)^{-1};
    the factor 2 reflects that 1 - conj(-alpha) alpha = 2 on the level set.
    """
    denom = 1.0 - np.conj(plus.atoms)[None, :] * minus.atoms[:, None]
    entries = 2.0 * np.sqrt(np.outer(minus.weights, plus.weights)) / denom
    return OperatorMatrix(entries, plus.space_tag(), minus.space_tag(),
                          "hilbert:kernel")


def hilbert_route_defect(basis: ModelSpaceBasis, plus: ClarkMeasure,
                         minus: ClarkMeasure) -> float:
    """Max entry difference between the kernel form of the Hilbert
    transform and the unitary composition route."""
    kernel = hilbert_transform_matrix(plus, minus)
    vp = clark_unitary(basis, plus).matrix
    vm = clark_unitary(basis, minus).matrix
    composed = vm @ vp.adjoint()  # adjoint = inverse for a unitary
    return float(np.max(np.abs(kernel.entries - composed.entries)))


def commutator_matrix(phi: Symbol, plus: ClarkMeasure,
                      minus: ClarkMeasure) -> OperatorMatrix:
    """Commutator-type operator with the difference-quotient kernel:
    entry (j, k) = sqrt(w_k^+ w_j^-) (phi(zeta_j) - phi(xi_k)) / (1 - conj(xi_k) zeta_j).

    Only atom values of phi enter.  The same matrix equals half of
    diag(phi(zeta)) H - H diag(phi(xi)) with H the unitary Hilbert
    transform; the kernel differences output-side values minus
    input-side values, the orientation that matches the Hankel operator
    exactly (not merely up to phase).
    """
    pv = np.asarray(phi(plus.atoms), dtype=complex)
    mv = np.asarray(phi(minus.atoms), dtype=complex)
    denom = 1.0 - np.conj(plus.atoms)[None, :] * minus.atoms[:, None]
    diff = mv[:, None] - pv[None, :]
    entries = np.sqrt(np.outer(minus.weights, plus.weights)) * diff / denom
    return OperatorMatrix(entries, plus.space_tag(), minus.space_tag(),
                          "commutator:kernel")


def commutator_route_defect(phi: Symbol, plus: ClarkMeasure,
                            minus: ClarkMeasure) -> float:
    """Check the kernel form against the multiplication-operator route
    (diag(phi) H - H diag(phi)) / 2."""
    kernel = commutator_matrix(phi, plus, minus)
    h = hilbert_transform_matrix(plus, minus).entries
    pv = np.asarray(phi(plus.atoms), dtype=complex)
    mv = np.asarray(phi(minus.atoms), dtype=complex)
    composed = 0.5 * (mv[:, None] * h - h * pv[None, :])
    return float(np.max(np.abs(kernel.entries - composed)))


# ---------------------------------------------------------------------------
# Cross-route equivalence with the boundary-quadrature Hankel matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    """Comparison of the quadrature and atomic constructions of a truncated
    Hankel operator."""

    deviation: float        # operator-norm gap after unitary alignment
    singular_gap: float     # max difference of sorted singular values
    embedding_defect: float  # worst unitarity defect among the three unitaries
    hankel: OperatorMatrix
    clark_route: OperatorMatrix


def cross_route_equivalence(phi: Symbol, basis: ModelSpaceBasis, alpha: complex,
                            quad: QuadratureSettings | None = None) -> EquivalenceReport:
    """Build the truncated Hankel operator twice and compare.

    Route one integrates phi against basis products over the circle.
    Route two never integrates: it samples phi at the level sets
    {theta = alpha} and {theta = -alpha}, forms the commutator-type
    kernel there, and conjugates back with the Clark embeddings.  For
    symbols whose conjugate lies in the squared model space the two
    matrices must agree entrywise.
    """
    theta = basis.theta
    gamma = hankel_matrix(phi, basis, quad)

    plus = clark_measure(theta, alpha)
    minus = clark_measure(theta, -complex(alpha))
    embed = clark_unitary(basis, plus)
    embed_conj = conjugate_clark_unitary(basis, minus)
    core = commutator_matrix(phi, plus, minus)
    clark_route = embed_conj.matrix.adjoint() @ core @ embed.matrix

    deviation = float(np.linalg.norm(gamma.entries - clark_route.entries, 2))
    sv_gap = float(np.max(np.abs(gamma.singular_values() - core.singular_values())))
    defect = max(embed.unitarity_defect(), embed_conj.unitarity_defect())
    return EquivalenceReport(deviation, sv_gap, defect, gamma, clark_route)
