import itertools

import numpy as np
import pytest

from hoeffding.bernoulli import (
    BernoulliPair,
    bernoulli_pmf,
    closed_form_decomposition,
    closed_form_indices,
    closed_form_vectors,
)
from hoeffding.decomposition import build_component_subspaces, decompose, hoeffding_classical
from hoeffding.distribution import validate_pmf
from hoeffding.errors import InadmissibleRho
from hoeffding.indices import variance_report


def random_pairs(seed, count):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        q1, q2 = rng.uniform(0.05, 0.95, size=2)
        lo, hi = max(0.0, q1 + q2 - 1), min(q1, q2)
        rho = rng.uniform(lo, hi)
        pair = BernoulliPair(q1, q2, rho)
        if np.all(pair.weights > 1e-3):
            out.append((pair, rng.normal(size=4)))
    return out


def test_pmf_examples():
    np.testing.assert_allclose(bernoulli_pmf(BernoulliPair(0.5, 0.5, 0.25)).weights.reshape(-1), [0.25] * 4)
    np.testing.assert_allclose(bernoulli_pmf(BernoulliPair(0.5, 0.5, 0.3)).weights.reshape(-1),
                               [0.3, 0.2, 0.2, 0.3], atol=1e-15)
    with pytest.raises(InadmissibleRho):
        bernoulli_pmf(BernoulliPair(0.2, 0.9, 0.05))
    with pytest.raises(InadmissibleRho):
        closed_form_vectors(BernoulliPair(0.5, 0.5, 0.5))


@pytest.mark.parametrize("pair,g", random_pairs(0, 20))
def test_vectors_solve_the_system(pair, g):
    v = closed_form_vectors(pair)
    p = pair.weights
    for a, b in [(0, 1), (0, 2), (0, 3), (3, 1), (3, 2)]:
        assert abs(np.sum(p * v[a] * v[b])) < 1e-12
    for a in range(4):
        assert np.sum(p * v[a] * v[a]) == pytest.approx(1.0, abs=1e-12)
        assert v[a][np.flatnonzero(v[a])[-1]] > 0
    dec = closed_form_decomposition(pair, g)
    np.testing.assert_allclose(sum(dec.components.values()), g, atol=1e-12)


def test_uniform_xor():
    dec = closed_form_decomposition(BernoulliPair(0.5, 0.5, 0.25), [0, 1, 1, 0])
    assert dec.e == pytest.approx(0.5)
    assert dec.alpha == pytest.approx(0.0, abs=1e-15) and dec.beta == pytest.approx(0.0, abs=1e-15)
    assert abs(dec.delta) == pytest.approx(0.5)
    np.testing.assert_allclose(dec.vectors[3], [1, -1, -1, 1])


def test_independence_point_matches_classical():
    for pair, g in random_pairs(1, 10):
        ind = pair.independent()
        dec = closed_form_decomposition(ind, g)
        ref = hoeffding_classical(validate_pmf(bernoulli_pmf(ind)), g)
        for s in range(4):
            np.testing.assert_allclose(dec.components[s], ref[s], atol=1e-12)


def test_matches_pipeline():
    for pair, g in random_pairs(2, 50):
        s = validate_pmf(bernoulli_pmf(pair))
        dec = decompose(build_component_subspaces(s), g)
        oracle = closed_form_decomposition(pair, g)
        for a in range(4):
            np.testing.assert_allclose(dec[a], oracle.components[a], atol=1e-8)


def test_indices_match_pipeline():
    for pair, g in random_pairs(3, 20):
        rep = variance_report(bernoulli_pmf(pair), np.reshape(g, (2, 2)))
        idx = closed_form_indices(pair, g)
        for a in range(4):
            row = rep.row(a)
            assert row.structural == pytest.approx(idx["structural"][a], abs=1e-9)
            assert row.correlative == pytest.approx(idx["correlative"][a], abs=1e-9)
            assert row.pure_interaction == pytest.approx(idx["pure"][a], abs=1e-9)
            assert row.dependence_effect == pytest.approx(idx["dependence"][a], abs=1e-9)
