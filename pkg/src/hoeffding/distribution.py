"""Finitely supported joint laws and the partition calculus of their sigma-algebras.

For a law with finitely many atoms, the sigma-algebra generated by ``X_A`` is the
partition of the atoms by the value of ``x_A``. Partitions are stored as
canonical label vectors (block ids numbered by first appearance), so two
partitions are equal exactly when their label vectors are equal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import lattice
from .errors import DegenerateMarginal, InputError, NegativeWeight, SumNotOne

SUM_TOL = 1e-12
EXHAUSTIVE_MAX_D = 8


@dataclass(frozen=True)
class InputSpec:
    name: str
    levels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(str(v) for v in self.levels))
        if len(self.levels) < 2:
            raise InputError(f"input {self.name!r} needs at least 2 levels")
        if len(set(self.levels)) != len(self.levels):
            raise InputError(f"input {self.name!r} has duplicate level labels")

    @property
    def size(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class JointPmf:
    """Probability table over the product grid of the input alphabets.

    ``weights`` has shape ``(m_1, ..., m_d)``; flattening it row-major (last
    input fastest) gives the dense wire order.
    """

    inputs: tuple[InputSpec, ...]
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        w = np.array(self.weights, dtype=float)
        shape = tuple(s.size for s in self.inputs)
        if not 1 <= len(shape) <= lattice.MAX_INPUTS:
            raise InputError(f"need between 1 and {lattice.MAX_INPUTS} inputs, got {len(shape)}")
        if w.size != math.prod(shape):
            raise InputError(f"expected {math.prod(shape)} weights for grid {shape}, got {w.size}")
        w = w.reshape(shape)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def d(self) -> int:
        return len(self.inputs)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.weights.shape

    def marginal(self, i: int) -> np.ndarray:
        """Univariate marginal of input ``i`` (zero-based)."""
        axes = tuple(j for j in range(self.d) if j != i)
        return self.weights.sum(axis=axes)

    @classmethod
    def from_array(cls, weights, names: Sequence[str] | None = None) -> "JointPmf":
        """Build a pmf with integer level labels ``0..m_i-1`` from an ``ndarray``."""
        w = np.asarray(weights, dtype=float)
        names = names or [f"X{i + 1}" for i in range(w.ndim)]
        inputs = [InputSpec(n, tuple(str(k) for k in range(m))) for n, m in zip(names, w.shape)]
        return cls(tuple(inputs), w)

    @classmethod
    def from_sparse(cls, inputs: Sequence[InputSpec], cells) -> "JointPmf":
        """``cells`` is an iterable of ``(cell_tuple, p)``; absent cells weigh 0."""
        shape = tuple(s.size for s in inputs)
        w = np.zeros(shape)
        for cell, p in cells:
            cell = tuple(int(c) for c in cell)
            if len(cell) != len(shape) or any(not 0 <= c < m for c, m in zip(cell, shape)):
                raise InputError(f"cell {cell} outside grid {shape}")
            w[cell] += float(p)
        return cls(tuple(inputs), w)


@dataclass(frozen=True, eq=False)
class SupportAtoms:
    """The positive-weight cells of a validated pmf, in row-major grid order."""

    pmf: JointPmf
    cells: np.ndarray  # (n, d) int level indices
    p: np.ndarray  # (n,) weights
    flat_index: np.ndarray  # (n,) row-major position in the grid
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def d(self) -> int:
        return self.pmf.d

    def atom_of(self, cell: Sequence[int]) -> int | None:
        flat = int(np.ravel_multi_index(tuple(int(c) for c in cell), self.pmf.shape))
        pos = int(np.searchsorted(self.flat_index, flat))
        if pos < self.n and self.flat_index[pos] == flat:
            return pos
        return None

    def restrict(self, grid_values) -> np.ndarray:
        """Model values on the atoms, from a full-grid table (any shape with the grid's size)."""
        g = np.asarray(grid_values, dtype=float).reshape(-1)
        if g.size != math.prod(self.pmf.shape):
            raise InputError(f"model table has {g.size} entries, grid has {math.prod(self.pmf.shape)}")
        return g[self.flat_index]


@dataclass(frozen=True, eq=False)
class AtomPartition:
    subset: int
    labels: np.ndarray  # canonical block id per atom

    @property
    def n_blocks(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    @property
    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_blocks)]
        for atom, b in enumerate(self.labels):
            out[b].append(atom)
        return out

    def same_as(self, other: "AtomPartition") -> bool:
        return np.array_equal(self.labels, other.labels)

    def refines(self, other: "AtomPartition") -> bool:
        """True when every block of ``self`` sits inside one block of ``other``."""
        pairs = np.unique(np.stack([self.labels, other.labels]), axis=1)
        return pairs.shape[1] == self.n_blocks


def _canonical(labels: np.ndarray) -> np.ndarray:
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse.reshape(-1)]


def validate_pmf(pmf: JointPmf) -> SupportAtoms:
    w = pmf.weights
    if not np.all(np.isfinite(w)):
        raise InputError("weights must be finite")
    if np.any(w < 0):
        raise NegativeWeight(f"negative weight {float(w.min())!r}")
    total = math.fsum(w.reshape(-1))
    if abs(total - 1.0) > SUM_TOL:
        raise SumNotOne(f"weights sum to {total!r}")
    for i, spec in enumerate(pmf.inputs):
        if np.count_nonzero(pmf.marginal(i) > 0) < 2:
            raise DegenerateMarginal(f"input {spec.name!r} is almost surely constant")
    flat = np.flatnonzero(w.reshape(-1) > 0)
    cells = np.stack(np.unravel_index(flat, pmf.shape), axis=1)
    return SupportAtoms(pmf, cells, w.reshape(-1)[flat].copy(), flat)


def partition_by(support: SupportAtoms, subset: int) -> AtomPartition:
    key = ("partition", subset)
    if key not in support._cache:
        cols = lattice.members(subset)
        if not cols:
            labels = np.zeros(support.n, dtype=np.int64)
        else:
            coded = np.ravel_multi_index(
                tuple(support.cells[:, c] for c in cols), tuple(support.pmf.shape[c] for c in cols)
            )
            labels = _canonical(coded)
        support._cache[key] = AtomPartition(subset, labels)
    return support._cache[key]


def sigma_meet(pa: AtomPartition, pb: AtomPartition) -> AtomPartition:
    """Finest partition coarser than both: connected components of the block-overlap graph."""
    if pa.labels.shape != pb.labels.shape:
        raise InputError("partitions are over different atom sets")
    ka = pa.n_blocks
    # graph on blocks: an A-block and a B-block are adjacent when they share an atom
    edges = np.unique(pa.labels * pb.n_blocks + pb.labels)
    rows, cols = edges // pb.n_blocks, ka + edges % pb.n_blocks
    size = ka + pb.n_blocks
    graph = coo_matrix((np.ones(len(edges)), (rows, cols)), shape=(size, size))
    _, comp = connected_components(graph, directed=False)
    return AtomPartition(pa.subset & pb.subset, _canonical(comp[pa.labels]))


@dataclass
class Assumption1Report:
    passed: bool
    violations: list[tuple[int, int]]
    pairs_checked: int
    exhaustive: bool


def _assumption1_pairs(d: int, exhaustive: bool):
    masks = lattice.enumerate_subsets(d)
    if exhaustive or d <= EXHAUSTIVE_MAX_D:
        yield from itertools.combinations(masks, 2)
        return
    full = lattice.full_mask(d)
    small = [m for m in masks if lattice.popcount(m) <= 3]
    seen = set()
    for a, b in itertools.combinations(small, 2):
        seen.add((a, b))
        yield a, b
    for a in masks:
        b = full ^ a
        pair = (a, b) if a < b else (b, a)
        if 0 < a < full and pair not in seen:
            seen.add(pair)
            yield pair


def check_assumption1(support: SupportAtoms, exhaustive: bool = False) -> Assumption1Report:
    """Test ``sigma_A ∩ sigma_B == sigma_{A∩B}`` on atom partitions.

    Nested pairs hold trivially and are skipped. For ``d > 8`` only pairs of
    subsets of size at most 3 plus complementary pairs are checked unless
    ``exhaustive`` is set.
    """
    violations = []
    checked = 0
    for a, b in _assumption1_pairs(support.d, exhaustive):
        if lattice.is_subset(a, b) or lattice.is_subset(b, a):
            continue
        checked += 1
        meet = sigma_meet(partition_by(support, a), partition_by(support, b))
        if not meet.same_as(partition_by(support, a & b)):
            violations.append((a, b))
    return Assumption1Report(not violations, violations, checked, exhaustive or support.d <= EXHAUSTIVE_MAX_D)


def pair_satisfies_assumption1(support: SupportAtoms, a: int, b: int) -> bool:
    meet = sigma_meet(partition_by(support, a), partition_by(support, b))
    return meet.same_as(partition_by(support, a & b))


@dataclass
class NestingReport:
    passed: bool
    failures: list[tuple[int, int]]  # (smaller, larger) with no extra refinement
    trivial_inputs: list[int]


def check_strict_nesting(support: SupportAtoms) -> NestingReport:
    failures = []
    for a in lattice.enumerate_subsets(support.d):
        n_a = partition_by(support, a).n_blocks
        for b in lattice.proper_submasks(a):
            if partition_by(support, b).n_blocks >= n_a:
                failures.append((b, a))
    trivial = [i for i in range(support.d) if partition_by(support, 1 << i).n_blocks < 2]
    failures.sort(key=lambda pair: (lattice.popcount(pair[1]), pair[1], lattice.popcount(pair[0]), pair[0]))
    return NestingReport(not failures and not trivial, failures, trivial)


def independent_copy(pmf: JointPmf) -> JointPmf:
    """Product law with the same univariate marginals."""
    w = np.ones(())
    for i in range(pmf.d):
        w = np.multiply.outer(w, pmf.marginal(i))
    return JointPmf(pmf.inputs, w)


def is_product_form(pmf: JointPmf, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(pmf.weights - independent_copy(pmf).weights)) <= tol)
