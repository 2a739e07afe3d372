"""Finite Blaschke products and their boundary geometry.

A finite Blaschke product is determined by its zeros inside the open disk
and a unimodular constant.  Each zero contributes one normalized factor;
a zero at the origin contributes the factor z itself.  On the circle the
product is unimodular and its phase increases strictly, winding around
the origin once per zero.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .harmonic import Symbol, TWO_PI


def _factor(lam: complex, z):
    """Normalized Blaschke factor for one zero (z itself when lam = 0)."""
    if lam == 0:
        return np.asarray(z, dtype=complex)
    return (abs(lam) / lam) * (lam - z) / (1.0 - np.conj(lam) * z)


def _factor_derivative(lam: complex, z):
    if lam == 0:
        return np.ones(np.shape(z), dtype=complex)
    return (abs(lam) / lam) * (abs(lam) ** 2 - 1.0) / (1.0 - np.conj(lam) * z) ** 2


class BlaschkeProduct(Symbol):
    """Finite Blaschke product with zeros in D and unimodular constant.

    The zero order is significant: downstream orthonormal bases follow it.
    """

    def __init__(self, zeros=(), gamma: complex = 1.0):
        zs = tuple(complex(lam) for lam in zeros)
        for lam in zs:
            if not abs(lam) < 1.0:
                raise ValueError(f"zero {lam:.6g} is not strictly inside the unit disk")
        g = complex(gamma)
        if abs(abs(g) - 1.0) > 1e-9:
            raise ValueError(f"constant must be unimodular, got |gamma| = {abs(g):.6g}")
        self.zeros = zs
        self.gamma = g / abs(g)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def eval(self, z):
        out = np.full(np.shape(z), self.gamma, dtype=complex)
        for lam in self.zeros:
            out = out * _factor(lam, z)
        return out

    def derivative(self, z):
        """Complex derivative, stable near the zeros (product rule with
        prefix/suffix products, no division by vanishing factors)."""
        z = np.asarray(z, dtype=complex)
        d = self.degree
        if d == 0:
            return np.zeros(z.shape, dtype=complex)
        facs = np.empty((d,) + z.shape, dtype=complex)
        ders = np.empty_like(facs)
        for i, lam in enumerate(self.zeros):
            facs[i] = _factor(lam, z)
            ders[i] = _factor_derivative(lam, z)
        prefix = np.ones_like(z)
        suffix = np.ones((d,) + z.shape, dtype=complex)
        for i in range(d - 2, -1, -1):
            suffix[i] = suffix[i + 1] * facs[i + 1]
        out = np.zeros_like(z)
        for i in range(d):
            out += ders[i] * prefix * suffix[i]
            prefix = prefix * facs[i]
        return self.gamma * out

    def boundary_derivative_modulus(self, xi):
        """|theta'(xi)| for |xi| = 1, i.e. the boundary phase speed.

        Equals sum_i (1 - |lam_i|^2) / |1 - conj(lam_i) xi|^2, which is
        strictly positive and integrates to the degree.
        """
        xi = np.asarray(xi, dtype=complex)
        out = np.zeros(xi.shape, dtype=float)
        for lam in self.zeros:
            out += (1.0 - abs(lam) ** 2) / np.abs(1.0 - np.conj(lam) * xi) ** 2
        return out

    def square(self) -> "BlaschkeProduct":
        """The product theta^2 (doubled zero list, squared constant)."""
        return BlaschkeProduct(self.zeros + self.zeros, self.gamma**2)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "zeros": [{"re": lam.real, "im": lam.imag} for lam in self.zeros],
            "gamma": {"re": self.gamma.real, "im": self.gamma.imag},
        }

    @staticmethod
    def _parse_complex(item) -> complex:
        if isinstance(item, dict):
            return complex(item.get("re", 0.0), item.get("im", 0.0))
        if isinstance(item, (list, tuple)):
            return complex(*item)
        return complex(item)

    @classmethod
    def from_dict(cls, data: dict) -> "BlaschkeProduct":
        zeros = [cls._parse_complex(item) for item in data.get("zeros", [])]
        gamma = cls._parse_complex(data.get("gamma", 1.0))
        return cls(zeros, gamma)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BlaschkeProduct":
        return cls.from_dict(json.loads(text))

    def label(self) -> str:
        """Short deterministic identifier used in operator space tags."""
        parts = [f"{lam.real:.12g}{lam.imag:+.12g}j" for lam in self.zeros]
        parts.append(f"g{self.gamma.real:.12g}{self.gamma.imag:+.12g}j")
        return ";".join(parts)

    def __repr__(self):
        return f"BlaschkeProduct(degree={self.degree})"


def boundary_zero_closure(zeros, boundary_margin: float = 0.1,
                          cluster_gap: float = 0.05) -> np.ndarray:
    """Estimate where a zero family accumulates on the unit circle.

    Zeros with modulus above 1 - boundary_margin are projected to the
    circle and clustered by single linkage on angular gaps; each cluster
    is represented by the projection of its most boundary-near zero (the
    best available estimate of the limit point).  Returns unit complex
    representatives sorted by angle; empty when no zeros approach T.
    """
    if isinstance(zeros, BlaschkeProduct):
        zs = np.asarray(zeros.zeros, dtype=complex)
    else:
        collected = []
        for item in zeros:
            if isinstance(item, BlaschkeProduct):
                collected.extend(item.zeros)
            else:
                collected.append(complex(item))
        zs = np.asarray(collected, dtype=complex)
    near = zs[np.abs(zs) > 1.0 - boundary_margin]
    if near.size == 0:
        return np.array([], dtype=complex)
    angles = np.mod(np.angle(near), TWO_PI)
    order = np.argsort(angles)
    angles, near = angles[order], near[order]
    gaps = np.diff(angles, append=angles[0] + TWO_PI)
    # split after every gap wider than the linkage threshold
    breaks = np.nonzero(gaps > cluster_gap)[0]
    if breaks.size == 0:
        groups = [np.arange(near.size)]
    else:
        idx = np.arange(near.size)
        rolled = np.roll(idx, -(breaks[0] + 1))
        groups, cur = [], [rolled[0]]
        for prev, nxt in zip(rolled[:-1], rolled[1:]):
            if gaps[prev] > cluster_gap:
                groups.append(np.array(cur))
                cur = [nxt]
            else:
                cur.append(nxt)
        groups.append(np.array(cur))
    reps = []
    for grp in groups:
        pick = grp[np.argmax(np.abs(near[grp]))]
        reps.append(near[pick] / abs(near[pick]))
    reps = np.asarray(reps, dtype=complex)
    return reps[np.argsort(np.mod(np.angle(reps), TWO_PI))]


@dataclass(frozen=True)
class ConnectivityReport:
    """Two-resolution flood-fill verdict on a sublevel set {|theta| < eps}."""

    verdict: str  # "connected" | "disconnected" | "inconclusive"
    components: int
    counts: tuple  # component count at each resolution


def _component_count(theta: BlaschkeProduct, eps: float, n_r: int, n_t: int) -> int:
    radii = (np.arange(n_r) + 0.5) / n_r
    angles = TWO_PI * np.arange(n_t) / n_t
    grid = radii[:, None] * np.exp(1j * angles)[None, :]
    mask = np.abs(theta(grid)) < eps
    if not mask.any():
        return 0
    labels, n = ndimage.label(mask)
    if n <= 1:
        return int(n)
    # merge labels across the angular seam and, when the sublevel set
    # contains the origin, across the innermost ring
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    left, right = labels[:, 0], labels[:, -1]
    for a, b in zip(left, right):
        if a and b:
            union(int(a), int(b))
    if abs(theta(0.0)) < eps:
        inner = [int(v) for v in labels[0] if v]
        for v in inner[1:]:
            union(inner[0], v)
    return len({find(v + 1) for v in range(n)})


def sublevel_connectivity(theta: BlaschkeProduct, eps: float,
                          n_r: int = 160, n_t: int = 320) -> ConnectivityReport:
    """Rasterized connectivity diagnostic for {z in D : |theta(z)| < eps}.

    The count is computed on a polar raster and re-checked at double
    resolution; disagreement (or an empty raster hit) yields verdict
    "inconclusive" rather than a guess.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    coarse = _component_count(theta, eps, n_r, n_t)
    fine = _component_count(theta, eps, 2 * n_r, 2 * n_t)
    if coarse != fine or fine == 0:
        return ConnectivityReport("inconclusive", fine, (coarse, fine))
    verdict = "connected" if fine == 1 else "disconnected"
    return ConnectivityReport(verdict, fine, (coarse, fine))
