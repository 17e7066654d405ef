"""Variance-based sensitivity indices built on the orthocanonical decomposition.

Two families split ``V[G(X)]`` itself (structural and correlative
contributions). Two more separate interaction from dependence: the pure
interaction effects are Sobol' indices of the model under the independent copy
of the inputs, and the dependence effects measure how far each oblique
component sits from the orthogonal projection onto its own space.

All values are in variance units.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import lattice
from .decomposition import (
    ComponentBasisSet,
    Decomposition,
    build_component_subspaces,
    decompose,
    hoeffding_classical,
    oblique_M,
    orthogonal_P,
)
from .distribution import JointPmf, SupportAtoms, independent_copy, validate_pmf
from .errors import CellNotInSupport, DegenerateTilde
from .hilbert import DEFAULT_TOL, weighted_norm

log = logging.getLogger(__name__)

CENTER_TOL = 1e-10


def _cov(p, f, g) -> float:
    return float(np.sum(p * (f - np.sum(p * f)) * (g - np.sum(p * g))))


def _sign(a: int, b: int) -> int:
    return -1 if (lattice.popcount(a) - lattice.popcount(b)) % 2 else 1


def structural_index(dec: Decomposition, subset: int) -> float:
    if subset == 0:
        return 0.0  # the mean component is constant
    g = dec.components[subset]
    return _cov(dec.p, g, g)


def correlative_index(dec: Decomposition, subset: int) -> float:
    g = dec.components[subset]
    return float(sum(_cov(dec.p, g, dec.components[b]) for b in sorted(lattice.uncomparables(subset, dec.d))))


def correlative_index_oblique(dec: Decomposition, subset: int) -> float:
    """Correlative contribution from the oblique projections ``M_B``:
    ``sum_{B ⊆ A} ± Cov(M_B[G], (I - M_A)[G])``."""
    rest = dec.values - oblique_M(dec, subset)
    return sum(_sign(subset, b) * _cov(dec.p, oblique_M(dec, b), rest) for b in lattice.submasks(subset))


def structural_index_oblique(dec: Decomposition, subset: int) -> float:
    """``sum_{B ⊆ A} ± (V[M_B[G]] - Cov(M_B[G], (I - M_A)[G]))``.

    This is the projection formula as commonly stated. It agrees with
    :func:`structural_index` for independent inputs only; under dependence it
    equals ``S_A^U`` minus ``S_A^C`` plus the cross covariances of components
    whose union is ``A``. See :func:`structural_index_covariance` for an identity
    that holds in general.
    """
    rest = dec.values - oblique_M(dec, subset)
    total = 0.0
    for b in lattice.submasks(subset):
        mb = oblique_M(dec, b)
        total += _sign(subset, b) * (_cov(dec.p, mb, mb) - _cov(dec.p, mb, rest))
    return total


def structural_index_covariance(dec: Decomposition, subset: int) -> float:
    """``sum_{B ⊆ A} ± Cov(M_B[G], M_A[G])``, which equals ``V[G_A]`` by hierarchical orthogonality."""
    ma = oblique_M(dec, subset)
    return sum(_sign(subset, b) * _cov(dec.p, oblique_M(dec, b), ma) for b in lattice.submasks(subset))


def dependence_effect(dec: Decomposition, bases: ComponentBasisSet, subset: int) -> float:
    """Second moment of the gap between the oblique component and the orthogonal projection."""
    gap = dec.components[subset] - orthogonal_P(bases, dec.values, subset)
    mean = float(np.sum(dec.p * gap))
    if abs(mean) > CENTER_TOL * max(1.0, weighted_norm(dec.p, dec.values)):
        log.warning("projection gap for %s is not centered (mean %.3e)", lattice.label(subset), mean)
    return float(np.sum(dec.p * gap * gap))


def independent_support(pmf: JointPmf) -> SupportAtoms:
    return validate_pmf(independent_copy(pmf))


def pure_interaction_indices(pmf: JointPmf, model) -> dict[int, float]:
    """Sobol' indices of ``G`` under the independent copy, rescaled by ``V[G(X)]``.

    ``model`` is the full-grid table; values at zero-probability cells of the
    original law are used because the independent copy may charge them.
    """
    support = validate_pmf(pmf)
    var_x = _cov(support.p, support.restrict(model), support.restrict(model))
    tilde = independent_support(pmf)
    dec = hoeffding_classical(tilde, tilde.restrict(model))
    var_tilde = dec.total_variance
    if var_tilde <= 0:
        raise DegenerateTilde("model is constant under the independent copy of the inputs")
    return {a: structural_index(dec, a) / var_tilde * var_x for a in lattice.enumerate_subsets(pmf.d)}


def pure_interaction(pmf: JointPmf, model, subset: int) -> float:
    return pure_interaction_indices(pmf, model)[subset]


def evaluation_explanation(dec: Decomposition, cell) -> dict[int, float]:
    """Per-subset attribution ``G_A(x_A)`` of the model value at a supported grid cell."""
    atom = dec.support.atom_of(cell)
    if atom is None:
        raise CellNotInSupport(f"cell {tuple(cell)} has zero probability")
    return {a: float(dec.components[a][atom]) for a in lattice.enumerate_subsets(dec.d)}


@dataclass
class IndexRow:
    subset: int
    dim: int
    structural: float
    correlative: float
    pure_interaction: float
    dependence_effect: float
    pure_interaction_normalized: float


@dataclass
class SensitivityReport:
    rows: list[IndexRow]
    model_variance: float
    sum_structural: float
    sum_correlative: float
    variance_identity_gap: float
    correlative_oblique_gap: float
    structural_oblique_gap: float
    structural_covariance_gap: float
    unverified: bool = False
    decomposition: Decomposition | None = field(default=None, repr=False)

    def row(self, subset: int) -> IndexRow:
        return next(r for r in self.rows if r.subset == subset)


def variance_report(pmf: JointPmf, model, *, check: bool = True, tol: float = DEFAULT_TOL,
                    eps_pd: float = 1e-10, exhaustive: bool = False) -> SensitivityReport:
    """All four index families, plus the gaps of every cross-check formula."""
    support = validate_pmf(pmf)
    bases = build_component_subspaces(support, check=check, tol=tol, eps_pd=eps_pd, exhaustive=exhaustive)
    dec = decompose(bases, support.restrict(model))
    var = dec.total_variance
    try:
        pure = pure_interaction_indices(pmf, model)
    except DegenerateTilde:
        pure = {a: 0.0 for a in bases.subsets}

    rows = []
    gaps = {"corr": 0.0, "struct": 0.0, "cov": 0.0}
    for a in bases.subsets:
        s_u = structural_index(dec, a)
        s_c = correlative_index(dec, a)
        gaps["corr"] = max(gaps["corr"], abs(correlative_index_oblique(dec, a) - s_c))
        gaps["struct"] = max(gaps["struct"], abs(structural_index_oblique(dec, a) - s_u))
        gaps["cov"] = max(gaps["cov"], abs(structural_index_covariance(dec, a) - s_u))
        rows.append(IndexRow(
            subset=a,
            dim=bases[a].dim,
            structural=s_u,
            correlative=s_c,
            pure_interaction=pure[a],
            dependence_effect=dependence_effect(dec, bases, a),
            pure_interaction_normalized=pure[a] / var if var > 0 else 0.0,
        ))
    sum_u = sum(r.structural for r in rows)
    sum_c = sum(r.correlative for r in rows)
    return SensitivityReport(
        rows=rows,
        model_variance=var,
        sum_structural=sum_u,
        sum_correlative=sum_c,
        variance_identity_gap=abs(sum_u + sum_c - var),
        correlative_oblique_gap=gaps["corr"],
        structural_oblique_gap=gaps["struct"],
        structural_covariance_gap=gaps["cov"],
        unverified=dec.unverified,
        decomposition=dec,
    )
