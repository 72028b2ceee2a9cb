import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckdist.bisimulation import (
    BisimRelation,
    ClosedSetPair,
    check_bisim,
    dump_relation,
    enumerate_closed_sets,
    load_relation,
    minimal_epsilon,
)
from ckdist.bounds import ck_upper_bound, tv_bisim_bound
from ckdist.chain import LabeledMarkovChain, bias_onegin, random_chain
from ckdist.distances import ck_truncated
from ckdist.exceptions import LabelMismatch, ParseError, TooManyStates, UnknownState


def brute_closed_sets(relation, n1, n2):
    out = []
    for a in range(1 << n1):
        for b in range(1 << n2):
            s1 = {i for i in range(n1) if a >> i & 1}
            s2 = {j for j in range(n2) if b >> j & 1}
            img = {j for i, j in relation.pairs if i in s1}
            pre = {i for i, j in relation.pairs if j in s2}
            if img <= s2 and pre <= s1:
                out.append(ClosedSetPair(frozenset(s1), frozenset(s2)))
    return out


def test_identity_closed_sets(sigma):
    rel = BisimRelation.identity(sigma, sigma)
    sets = enumerate_closed_sets(rel, sigma, sigma)
    as_pairs = {(tuple(sorted(c.set1)), tuple(sorted(c.set2))) for c in sets}
    assert as_pairs == {((), ()), ((0,), (0,)), ((1,), (1,)), ((0, 1), (0, 1))}


def test_partial_relation_allows_unrelated_states():
    a = random_chain(np.random.default_rng(0), 2, 2)
    rel = BisimRelation(frozenset({(0, 0)}))
    sets = enumerate_closed_sets(rel, a, a)
    assert ClosedSetPair(frozenset(), frozenset({1})) in sets
    assert ClosedSetPair(frozenset({0, 1}), frozenset({0})) in sets
    assert ClosedSetPair(frozenset({0}), frozenset()) not in sets


def test_empty_relation_everything_closed(sigma):
    sets = enumerate_closed_sets(BisimRelation(frozenset()), sigma, sigma)
    assert len(sets) == 16


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n1=st.integers(1, 4), n2=st.integers(1, 4))
def test_enumeration_matches_brute_force(seed, n1, n2):
    rng = np.random.default_rng(seed)
    a, b = random_chain(rng, n1, 2), random_chain(rng, n2, 2)
    pairs = frozenset((i, j) for i in range(n1) for j in range(n2) if rng.random() < 0.4)
    rel = BisimRelation(pairs)
    got = enumerate_closed_sets(rel, a, b)
    assert set(got) == set(brute_closed_sets(rel, n1, n2))
    assert len(got) == len(set(got))


def test_guard():
    rng = np.random.default_rng(0)
    a, b = random_chain(rng, 11, 2), random_chain(rng, 11, 2)
    with pytest.raises(TooManyStates):
        enumerate_closed_sets(BisimRelation(frozenset()), a, b)
    with pytest.raises(TooManyStates):
        check_bisim(BisimRelation(frozenset()), 0.1, a, b)


def test_onegin_accept_and_reject(sigma):
    b = bias_onegin(0.01)
    rel = BisimRelation.identity(sigma, b)
    assert check_bisim(rel, 0.01, sigma, b).accepted
    verdict = check_bisim(rel, 0.005, sigma, b)
    assert not verdict.accepted
    assert verdict.witness.gap == pytest.approx(0.01, abs=1e-12)
    assert verdict.witness.closed_set == ClosedSetPair(frozenset({0}), frozenset({0}))
    assert verdict.witness.pair == ("v", "v")


def test_self_identity_is_exact(sigma):
    rel = BisimRelation.identity(sigma, sigma)
    verdict = check_bisim(rel, 1e-6, sigma, sigma)
    assert verdict.accepted and verdict.exact
    assert minimal_epsilon(rel, sigma, sigma) == 0.0


@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3, 1e-4])
def test_onegin_minimal_epsilon(sigma, eps):
    b = bias_onegin(eps)
    assert abs(minimal_epsilon(BisimRelation.identity(sigma, b), sigma, b) - eps) <= 1e-12


def test_label_mismatch(sigma):
    rel = BisimRelation.from_names([("v", "c")], sigma, sigma)
    with pytest.raises(LabelMismatch):
        minimal_epsilon(rel, sigma, sigma)
    verdict = check_bisim(rel, 0.5, sigma, sigma)
    assert not verdict.accepted
    assert verdict.label_mismatch == ("v", "c")


def test_initial_mass_witness():
    a = LabeledMarkovChain(["x", "y"], ["a", "b"], [0.5, 0.5], [[1, 0], [0, 1]], [0, 1])
    b = LabeledMarkovChain(["x", "y"], ["a", "b"], [0.8, 0.2], [[1, 0], [0, 1]], [0, 1])
    rel = BisimRelation.identity(a, b)
    assert minimal_epsilon(rel, a, b) == pytest.approx(0.3)
    verdict = check_bisim(rel, 0.1, a, b)
    assert verdict.witness.pair is None
    assert verdict.witness.gap == pytest.approx(0.3)


def test_relation_file_round_trip(tmp_path, sigma):
    rel = BisimRelation.identity(sigma, sigma)
    path = tmp_path / "rel.json"
    dump_relation(rel, sigma, sigma, path)
    assert json.loads(path.read_text()) == {"pairs": [["v", "v"], ["c", "c"]]}
    assert load_relation(path, sigma, sigma) == rel


def test_relation_file_errors(tmp_path, sigma):
    path = tmp_path / "rel.json"
    path.write_text('{"pairs": [["v", "zz"]]}')
    with pytest.raises(UnknownState):
        load_relation(path, sigma, sigma)
    path.write_text('{"pears": []}')
    with pytest.raises(ParseError):
        load_relation(path, sigma, sigma)


def perturbed_copy(chain, rng, scale):
    """Same structure, transition rows nudged by at most ``scale`` in l1 / 2."""
    noise = rng.dirichlet(np.ones(chain.n_states), size=chain.n_states)
    p = (1 - scale) * chain.transitions + scale * noise
    return LabeledMarkovChain(chain.states, chain.labels, chain.initial, p, chain.labeling)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5), scale=st.floats(0.0, 0.3))
def test_consistency_and_bridge(seed, n, scale):
    rng = np.random.default_rng(seed)
    a = random_chain(rng, n, 2)
    b = perturbed_copy(a, rng, scale)
    rel = BisimRelation.identity(a, b)
    eps = minimal_epsilon(rel, a, b)
    assert check_bisim(rel, eps + 1e-12, a, b).accepted
    if eps > 1e-9:
        assert not check_bisim(rel, eps - 1e-9, a, b).accepted
        assert check_bisim(rel, min(1.0, 2 * eps), a, b).accepted
    if 0.0 < eps < 1.0:
        report = ck_truncated(a, b, 12)
        assert report.s_k <= ck_upper_bound(eps, 2) + 1e-12
        for t in report.per_horizon[:10]:
            assert t.tv <= tv_bisim_bound(eps, t.i) + 1e-12
