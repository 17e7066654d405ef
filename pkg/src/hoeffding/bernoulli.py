"""Closed-form decomposition for two dependent Bernoulli inputs.

The law of ``(X1, X2)`` on ``{0,1}^2`` is fixed by ``q1 = P(X1=1)``,
``q2 = P(X2=1)`` and ``rho = E[X1 X2]``. Functions are 4-vectors in the order
``(00, 01, 10, 11)``. The unit vectors spanning the four component spaces are
written out explicitly below, so nothing here goes through the general solver;
that is what makes this module usable as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import JointPmf
from .errors import InadmissibleRho

SUBSETS = (0, 1, 2, 3)


@dataclass(frozen=True)
class BernoulliPair:
    q1: float
    q2: float
    rho: float

    @property
    def weights(self) -> np.ndarray:
        q1, q2, rho = self.q1, self.q2, self.rho
        return np.array([1 - q1 - q2 + rho, q2 - rho, q1 - rho, rho])

    def validate(self, strict: bool = False) -> None:
        for name, q in (("q1", self.q1), ("q2", self.q2)):
            if not 0 < q < 1:
                raise InadmissibleRho(f"{name} must lie in (0, 1), got {q!r}")
        w = self.weights
        if np.any(w < 0) or (strict and np.any(w <= 0)):
            raise InadmissibleRho(
                f"rho={self.rho!r} gives cell weights {w.tolist()} for q1={self.q1!r}, q2={self.q2!r}"
            )

    def independent(self) -> "BernoulliPair":
        return BernoulliPair(self.q1, self.q2, self.q1 * self.q2)


def bernoulli_pmf(pair: BernoulliPair) -> JointPmf:
    pair.validate()
    return JointPmf.from_array(pair.weights.reshape(2, 2))


@dataclass
class BernoulliDecomposition:
    pair: BernoulliPair
    vectors: dict[int, np.ndarray]  # v_∅, v_1, v_2, v_12 keyed by subset mask
    coefficients: dict[int, float]  # e, alpha, beta, delta
    components: dict[int, np.ndarray]

    @property
    def e(self) -> float:
        return self.coefficients[0]

    @property
    def alpha(self) -> float:
        return self.coefficients[1]

    @property
    def beta(self) -> float:
        return self.coefficients[2]

    @property
    def delta(self) -> float:
        return self.coefficients[3]


def closed_form_vectors(pair: BernoulliPair) -> dict[int, np.ndarray]:
    """Unit vectors ``v_∅, v_1, v_2, v_12``; the last nonzero entry of each is positive."""
    pair.validate(strict=True)
    q1, q2 = pair.q1, pair.q2
    p = pair.weights
    c = 1.0
    g0, g1 = -math.sqrt(q1 / (1 - q1)), math.sqrt((1 - q1) / q1)
    h0, h1 = -math.sqrt(q2 / (1 - q2)), math.sqrt((1 - q2) / q2)
    # p_ij * k_ij must sum to zero overall and along each row and column.
    t = 1.0 / math.sqrt(float(np.sum(1.0 / p)))
    k = t * np.array([1.0, -1.0, -1.0, 1.0]) / p
    return {
        0: np.full(4, c),
        1: np.array([g0, g0, g1, g1]),
        2: np.array([h0, h1, h0, h1]),
        3: k,
    }


def closed_form_decomposition(pair: BernoulliPair, g) -> BernoulliDecomposition:
    """Solve ``G = e v_∅ + alpha v_1 + beta v_2 + delta v_12``.

    ``v_12`` and ``v_∅`` are orthogonal to everything else, so ``delta`` and
    ``e`` are inner products; ``(alpha, beta)`` solve the 2x2 Gram system of
    ``v_1, v_2``, whose off-diagonal is the Pearson correlation of the inputs.
    """
    g = np.asarray(g, dtype=float).reshape(4)
    v = closed_form_vectors(pair)
    p = pair.weights
    delta = float(np.sum(p * v[3] * g))
    e = float(np.sum(p * g))
    r = float(np.sum(p * v[1] * v[2]))
    a = float(np.sum(p * v[1] * g))
    b = float(np.sum(p * v[2] * g))
    alpha = (a - r * b) / (1 - r * r)
    beta = (b - r * a) / (1 - r * r)
    coef = {0: e, 1: alpha, 2: beta, 3: delta}
    return BernoulliDecomposition(pair, v, coef, {s: coef[s] * v[s] for s in SUBSETS})


def _cov(p, f, h) -> float:
    return float(np.sum(p * (f - np.sum(p * f)) * (h - np.sum(p * h))))


def closed_form_indices(pair: BernoulliPair, g) -> dict[str, dict[int, float]]:
    """The four index families for the pair, from the closed-form components only."""
    g = np.asarray(g, dtype=float).reshape(4)
    dec = closed_form_decomposition(pair, g)
    p = pair.weights
    comp = dec.components
    var = _cov(p, g, g)
    structural = {s: _cov(p, comp[s], comp[s]) for s in SUBSETS}
    correlative = {0: 0.0, 1: _cov(p, comp[1], comp[2]), 2: _cov(p, comp[1], comp[2]), 3: 0.0}
    dependence = {}
    for s in SUBSETS:
        proj = dec.vectors[s] * float(np.sum(p * dec.vectors[s] * g))
        dependence[s] = float(np.sum(p * (comp[s] - proj) ** 2))
    tilde = pair.independent()
    tilde_dec = closed_form_decomposition(tilde, g)
    pt = tilde.weights
    var_tilde = _cov(pt, g, g)
    pure = {
        s: (_cov(pt, tilde_dec.components[s], tilde_dec.components[s]) / var_tilde * var if var_tilde > 0 else 0.0)
        for s in SUBSETS
    }
    return {"structural": structural, "correlative": correlative, "pure": pure, "dependence": dependence}
