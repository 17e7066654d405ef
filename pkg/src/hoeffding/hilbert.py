"""Weighted Hilbert-space numerics on the support atoms.

Functions of the inputs are vectors of their values on the atoms, with inner
product ``<f, g> = sum(p * f * g)``. Bases are stored as ``(n, k)`` column
matrices that are orthonormal for that inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lattice
from .distribution import SupportAtoms, pair_satisfies_assumption1, partition_by
from .errors import Assumption1NotVerified

DEFAULT_TOL = 1e-10
DEFAULT_EPS_PD = 1e-10


@dataclass(frozen=True, eq=False)
class WeightedBasis:
    subset: int
    columns: np.ndarray
    p: np.ndarray

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    def gram(self) -> np.ndarray:
        return self.columns.T @ (self.p[:, None] * self.columns)

    def coefficients(self, values) -> np.ndarray:
        return self.columns.T @ (self.p * np.asarray(values, dtype=float))

    def project(self, values) -> np.ndarray:
        """Orthogonal projection of ``values`` onto the span."""
        return self.columns @ self.coefficients(values)


def weighted_inner(p, f, g) -> float:
    return float(np.sum(p * f * g))


def weighted_norm(p, f) -> float:
    return float(np.sqrt(np.sum(p * np.square(f))))


def _fix_signs(q: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each column made positive (first one on ties).
    if q.size:
        idx = np.argmax(np.abs(q) - 1e-12 * np.arange(q.shape[0])[:, None], axis=0)
        q = q * np.where(q[idx, np.arange(q.shape[1])] < 0, -1.0, 1.0)
    return q


def weighted_orthonormalize(vectors, p, tol: float = DEFAULT_TOL, scale: float | None = None,
                            subset: int = 0) -> WeightedBasis:
    """P-orthonormal basis of the column span of ``vectors``.

    Directions whose weighted singular value falls below ``tol * scale`` are
    dropped; ``scale`` defaults to the largest singular value.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(vectors, dtype=float).reshape(len(p), -1)
    root = np.sqrt(p)
    if v.shape[1] == 0:
        return WeightedBasis(subset, np.zeros((len(p), 0)), p)
    u, s, _ = np.linalg.svd(root[:, None] * v, full_matrices=False)
    ref = s[0] if scale is None else scale
    rank = int(np.count_nonzero(s > tol * ref)) if ref > 0 else 0
    q = u[:, :rank] / root[:, None]
    return WeightedBasis(subset, _fix_signs(q), p)


def complement_within(values, basis: WeightedBasis, tol: float = DEFAULT_TOL, subset: int = 0) -> WeightedBasis:
    """Orthonormal basis of ``span(values) ⊖ span(basis)``.

    ``values`` must be P-orthonormal; the projection is subtracted twice.
    """
    r = np.array(values, dtype=float)
    for _ in range(2):
        if basis.dim:
            r = r - basis.columns @ (basis.columns.T @ (basis.p[:, None] * r))
    return weighted_orthonormalize(r, basis.p, tol, scale=1.0, subset=subset)


def marginal_space_basis(support: SupportAtoms, subset: int) -> WeightedBasis:
    """Normalized block indicators of the partition by ``x_subset``: a basis of L²(σ_A)."""
    key = ("marginal", subset)
    if key not in support._cache:
        labels = partition_by(support, subset).labels
        k = int(labels.max()) + 1
        cols = np.zeros((support.n, k))
        cols[np.arange(support.n), labels] = 1.0
        mass = np.bincount(labels, weights=support.p, minlength=k)
        support._cache[key] = WeightedBasis(subset, cols / np.sqrt(mass), support.p)
    return support._cache[key]


def dixmier_angle(h: WeightedBasis, k: WeightedBasis) -> float:
    """Cosine of the minimal angle: largest singular value of the cross Gram matrix."""
    if h.dim == 0 or k.dim == 0:
        return 0.0
    cross = h.columns.T @ (h.p[:, None] * k.columns)
    return float(min(1.0, np.linalg.norm(cross, 2)))


def friedrichs_angle(support: SupportAtoms, a: int, b: int, *, check: bool = True,
                     tol: float = DEFAULT_TOL) -> float:
    """Cosine of the Friedrichs angle between L²(σ_A) and L²(σ_B).

    The intersection is taken as L²(σ_{A∩B}), which requires the pair to satisfy
    non-perfect functional dependence; ``check=False`` skips that test.
    """
    if lattice.is_subset(a, b) or lattice.is_subset(b, a):
        return 0.0
    a, b = min(a, b), max(a, b)  # bitwise symmetric
    if check and not pair_satisfies_assumption1(support, a, b):
        raise Assumption1NotVerified(
            f"sigma-algebra meet of {lattice.label(a)} and {lattice.label(b)} is larger than "
            f"that of {lattice.label(a & b)}"
        )
    common = marginal_space_basis(support, a & b)
    qa = complement_within(marginal_space_basis(support, a).columns, common, tol)
    qb = complement_within(marginal_space_basis(support, b).columns, common, tol)
    cosine = dixmier_angle(qa, qb)
    # below the rank tolerance the quotients are numerically orthogonal
    return 0.0 if cosine <= tol else cosine


@dataclass(frozen=True, eq=False)
class FeshchenkoMatrix:
    d: int
    subsets: tuple[int, ...]
    entries: np.ndarray
    min_eigenvalue: float

    def entry(self, a: int, b: int) -> float:
        idx = {m: i for i, m in enumerate(self.subsets)}
        return float(self.entries[idx[a], idx[b]])

    def restricted(self, subset: int) -> np.ndarray:
        """Principal submatrix over the proper subsets of ``subset`` (empty set included)."""
        keep = [i for i, m in enumerate(self.subsets) if lattice.is_subset(m, subset) and m != subset]
        return self.entries[np.ix_(keep, keep)]


def feshchenko_matrix(support: SupportAtoms, *, check: bool = True, tol: float = DEFAULT_TOL) -> FeshchenkoMatrix:
    subsets = lattice.enumerate_subsets(support.d)
    size = len(subsets)
    delta = np.eye(size)
    for i in range(size):
        for j in range(i + 1, size):
            c = friedrichs_angle(support, subsets[i], subsets[j], check=check, tol=tol)
            delta[i, j] = delta[j, i] = -c
    eig = np.linalg.eigvalsh(delta)
    return FeshchenkoMatrix(support.d, tuple(subsets), delta, float(eig[0]))


@dataclass
class Assumption2Report:
    passed: bool
    min_eigenvalue: float
    eps: float


def check_assumption2(delta, eps: float = DEFAULT_EPS_PD) -> Assumption2Report:
    """Positive definiteness of the Feshchenko matrix (a ``FeshchenkoMatrix`` or a plain array)."""
    if isinstance(delta, FeshchenkoMatrix):
        lam = delta.min_eigenvalue
    else:
        lam = float(np.linalg.eigvalsh(np.asarray(delta, dtype=float))[0])
    return Assumption2Report(lam > eps, lam, eps)
