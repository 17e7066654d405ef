"""Orthocanonical decomposition of a model table.

The component spaces are built level by level: ``V_∅`` holds the constants and
``V_A`` is the orthogonal complement, inside L²(σ_A), of the sum of all ``V_B``
with ``B ⊊ A``. Under the two admissibility assumptions the ``V_A`` form a
direct sum of the whole function space, so every model has a unique expansion
``G = sum_A G_A`` with ``G_A ∈ V_A``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import lattice
from .distribution import (
    SupportAtoms,
    check_assumption1,
    check_strict_nesting,
    is_product_form,
    partition_by,
)
from .errors import (
    Assumption1NotVerified,
    Assumption2Failed,
    DimensionMismatch,
    NotProductForm,
    SingularSystem,
    StrictNestingFailed,
)
from .hilbert import (
    DEFAULT_EPS_PD,
    DEFAULT_TOL,
    WeightedBasis,
    check_assumption2,
    complement_within,
    feshchenko_matrix,
    marginal_space_basis,
    weighted_norm,
    weighted_orthonormalize,
)

log = logging.getLogger(__name__)

MAX_CONDITION = 1e12


@dataclass
class AdmissibilityReport:
    assumption1: object
    strict_nesting: object
    assumption2: object | None
    delta: object | None

    @property
    def passed(self) -> bool:
        return bool(
            self.assumption1.passed
            and self.strict_nesting.passed
            and self.assumption2 is not None
            and self.assumption2.passed
        )


def check_admissibility(support: SupportAtoms, *, exhaustive: bool = False, tol: float = DEFAULT_TOL,
                        eps_pd: float = DEFAULT_EPS_PD) -> AdmissibilityReport:
    """Run every admissibility check; the Feshchenko matrix is only formed when assumption 1 holds."""
    a1 = check_assumption1(support, exhaustive=exhaustive)
    nesting = check_strict_nesting(support)
    a2 = delta = None
    if a1.passed:
        delta = feshchenko_matrix(support, check=False, tol=tol)
        a2 = check_assumption2(delta, eps_pd)
    return AdmissibilityReport(a1, nesting, a2, delta)


def require_admissible(report: AdmissibilityReport) -> None:
    if not report.assumption1.passed:
        a, b = report.assumption1.violations[0]
        raise Assumption1NotVerified(
            f"non-perfect functional dependence fails for ({lattice.label(a)}, {lattice.label(b)})"
        )
    if not report.strict_nesting.passed:
        raise StrictNestingFailed("generated sigma-algebras are not strictly nested")
    if not report.assumption2.passed:
        raise Assumption2Failed(
            f"Feshchenko matrix not positive definite (min eigenvalue {report.assumption2.min_eigenvalue:.3e})"
        )


@dataclass
class ComponentBasisSet:
    support: SupportAtoms
    bases: dict[int, WeightedBasis]
    unverified: bool = False
    admissibility: AdmissibilityReport | None = None

    @property
    def dims(self) -> dict[int, int]:
        return {a: b.dim for a, b in self.bases.items()}

    @property
    def subsets(self) -> list[int]:
        return lattice.enumerate_subsets(self.support.d)

    def __getitem__(self, subset: int) -> WeightedBasis:
        return self.bases[subset]


def build_component_subspaces(support: SupportAtoms, *, check: bool = True, tol: float = DEFAULT_TOL,
                              eps_pd: float = DEFAULT_EPS_PD, exhaustive: bool = False) -> ComponentBasisSet:
    """Inductive construction of the component spaces ``V_A``.

    With ``check=False`` the admissibility tests are skipped and the result is
    flagged ``unverified``.
    """
    report = None
    if check:
        report = check_admissibility(support, exhaustive=exhaustive, tol=tol, eps_pd=eps_pd)
        require_admissible(report)
    else:
        log.warning("admissibility checks skipped; decomposition is unverified")

    bases: dict[int, WeightedBasis] = {}
    for a in lattice.enumerate_subsets(support.d):
        if a == 0:
            bases[0] = marginal_space_basis(support, 0)
            continue
        lower = [bases[b].columns for b in lattice.proper_submasks(a)]
        span = weighted_orthonormalize(np.hstack(lower), support.p, tol)
        bases[a] = complement_within(marginal_space_basis(support, a).columns, span, tol, subset=a)

    total = sum(b.dim for b in bases.values())
    if total != support.n:
        raise DimensionMismatch(f"component dimensions sum to {total}, expected {support.n}")
    return ComponentBasisSet(support, bases, unverified=not check, admissibility=report)


@dataclass
class Decomposition:
    support: SupportAtoms
    values: np.ndarray
    components: dict[int, np.ndarray]
    coefficients: dict[int, np.ndarray] = field(default_factory=dict)
    bases: ComponentBasisSet | None = None
    condition_number: float = 1.0
    unverified: bool = False

    @property
    def d(self) -> int:
        return self.support.d

    @property
    def p(self) -> np.ndarray:
        return self.support.p

    @property
    def mean(self) -> float:
        return float(np.sum(self.p * self.values))

    @property
    def total_variance(self) -> float:
        return float(np.sum(self.p * np.square(self.values - self.mean)))

    @property
    def reconstruction_residual(self) -> float:
        return weighted_norm(self.p, sum(self.components.values()) - self.values)

    def __getitem__(self, subset: int) -> np.ndarray:
        return self.components[subset]


def decompose(bases: ComponentBasisSet, values) -> Decomposition:
    """Unique expansion of ``values`` (model on the atoms) over the component spaces."""
    support = bases.support
    g = np.asarray(values, dtype=float)
    if g.shape != (support.n,):
        raise ValueError(f"expected {support.n} model values on the atoms, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("model values must be finite")
    order = lattice.enumerate_subsets(support.d)
    full = np.hstack([bases[a].columns for a in order])
    root = np.sqrt(support.p)
    weighted = root[:, None] * full
    cond = float(np.linalg.cond(weighted))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularSystem(f"component basis condition number {cond:.3e} exceeds {MAX_CONDITION:.0e}")
    coef = np.linalg.solve(weighted, root * g)
    components, coefficients = {}, {}
    start = 0
    for a in order:
        k = bases[a].dim
        coefficients[a] = coef[start:start + k]
        components[a] = bases[a].columns @ coefficients[a]
        start += k
    return Decomposition(support, g, components, coefficients, bases, cond, bases.unverified)


def oblique_M(dec: Decomposition, subset: int) -> np.ndarray:
    """Projection onto L²(σ_A) along the components not indexed by subsets of A."""
    return sum(dec.components[b] for b in lattice.submasks(subset))


def conditional_expectation(support: SupportAtoms, values, subset: int) -> np.ndarray:
    labels = partition_by(support, subset).labels
    g = np.asarray(values, dtype=float)
    mass = np.bincount(labels, weights=support.p)
    block_mean = np.bincount(labels, weights=support.p * g) / mass
    return block_mean[labels]


def orthogonal_P(bases: ComponentBasisSet, values, subset: int) -> np.ndarray:
    return bases[subset].project(values)


def verify_mobius(dec: Decomposition) -> float:
    """Largest weighted-norm gap between ``G_A`` and the alternating sum of the ``M_B[G]``."""
    m = {b: oblique_M(dec, b) for b in lattice.enumerate_subsets(dec.d)}
    return max(
        weighted_norm(dec.p, lattice.mobius_alternating_sum(m, a) - dec.components[a]) for a in m
    )


def hoeffding_classical(support: SupportAtoms, values) -> Decomposition:
    """Classical ANOVA components via conditional expectations; product laws only."""
    if not is_product_form(support.pmf):
        raise NotProductForm("classical Hoeffding decomposition needs mutually independent inputs")
    g = np.asarray(values, dtype=float)
    cond = {b: conditional_expectation(support, g, b) for b in lattice.enumerate_subsets(support.d)}
    components = {a: lattice.mobius_alternating_sum(cond, a) for a in cond}
    return Decomposition(support, g, components)
