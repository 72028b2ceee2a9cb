import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckdist.exceptions import LengthMismatch, OutOfRange, TooLarge
from ckdist.oracles import path_distribution
from ckdist.product import (
    ProductSpec,
    encode_product,
    product_tv_bruteforce,
    product_word_probability,
    tv_via_linear_system,
    tv_via_sk_difference,
)
from ckdist.traces import iter_levels, level_at

params = st.floats(0.0, 1.0)


def spec_pair(k):
    return st.tuples(
        st.lists(params, min_size=k, max_size=k), st.lists(params, min_size=k, max_size=k)
    ).map(lambda t: (ProductSpec(t[0]), ProductSpec(t[1])))


def test_spec_validation():
    with pytest.raises(OutOfRange):
        ProductSpec(())
    with pytest.raises(OutOfRange):
        ProductSpec((0.5, 1.5))
    assert ProductSpec.parse("0.3, 0.9").params == (0.3, 0.9)


def test_deterministic_encoder():
    chain = encode_product(ProductSpec((1.0,)))
    assert chain.states == ("0_1", "1_1")
    assert chain.n_states == 2
    level = level_at(chain, chain, 1)
    assert level.distribution(1) == {(1,): 1.0}
    assert level_at(chain, chain, 2).distribution(1) == {(1, 0): 1.0}
    assert path_distribution(chain, 2)[(1, 0)] == 1.0


def test_uniform_encoder():
    chain = encode_product(ProductSpec((0.5, 0.5)))
    dist = path_distribution(chain, 2)
    assert dist == {w: 0.25 for w in itertools.product(range(2), repeat=2)}


def test_encoder_values():
    chain = encode_product(ProductSpec((0.3, 0.9)))
    level = level_at(chain, chain, 2)
    dist = level.distribution(1)
    assert dist[(1, 1)] == pytest.approx(0.27, abs=1e-15)
    assert dist[(1, 0)] == pytest.approx(0.03, abs=1e-15)
    assert dist[(0, 1)] == pytest.approx(0.63, abs=1e-15)
    assert dist[(0, 0)] == pytest.approx(0.07, abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(ps=st.lists(params, min_size=1, max_size=10))
def test_encoder_generates_product(ps):
    spec = ProductSpec(ps)
    chain = encode_product(spec)
    for level in iter_levels(chain, chain, spec.k):
        dist = level.distribution(1)
        for w in itertools.product(range(2), repeat=level.horizon):
            assert abs(dist.get(w, 0.0) - product_word_probability(spec, w)) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(pair=st.integers(1, 5).flatmap(spec_pair), extra=st.integers(1, 4))
def test_tv_stationary_past_k(pair, extra):
    s1, s2 = pair
    levels = list(iter_levels(encode_product(s1), encode_product(s2), s1.k + extra))
    tv_k = levels[s1.k - 1].tv
    for lv in levels[s1.k :]:
        assert lv.tv == tv_k


def test_bruteforce_values():
    s = ProductSpec((0.2, 0.7))
    assert product_tv_bruteforce(s, s) == 0.0
    assert product_tv_bruteforce(ProductSpec((1.0,)), ProductSpec((0.0,))) == 1.0
    assert product_tv_bruteforce(ProductSpec((0.7,)), ProductSpec((0.4,))) == pytest.approx(0.3, abs=1e-15)


def test_bruteforce_guards():
    with pytest.raises(LengthMismatch):
        product_tv_bruteforce(ProductSpec((0.1,)), ProductSpec((0.1, 0.2)))
    big = ProductSpec((0.5,) * 21)
    with pytest.raises(TooLarge):
        product_tv_bruteforce(big, big)


def test_sk_difference_values():
    s = ProductSpec((0.2, 0.7, 0.9))
    assert tv_via_sk_difference(s, s) == 0.0
    assert tv_via_sk_difference(ProductSpec((0.7,)), ProductSpec((0.4,))) == pytest.approx(0.3, abs=1e-12)


def test_linear_system_values():
    a, b = ProductSpec((0.7,)), ProductSpec((0.4,))
    assert tv_via_linear_system(a, b) == pytest.approx(0.3, abs=1e-12)
    s = ProductSpec((0.5, 0.5))
    assert tv_via_linear_system(s, s) == 0.0
    big = ProductSpec((0.5,) * 13)
    with pytest.raises(TooLarge):
        tv_via_linear_system(big, big)


@settings(max_examples=30, deadline=None)
@given(pair=st.integers(1, 8).flatmap(spec_pair))
def test_three_routes_agree(pair):
    s1, s2 = pair
    brute = product_tv_bruteforce(s1, s2)
    assert abs(tv_via_sk_difference(s1, s2) - brute) <= 1e-9
    assert abs(tv_via_linear_system(s1, s2) - brute) <= 1e-8


def test_random_eight_parameter_specs():
    rng = np.random.default_rng(99)
    for _ in range(5):
        s1, s2 = ProductSpec(rng.random(8)), ProductSpec(rng.random(8))
        assert abs(tv_via_sk_difference(s1, s2) - product_tv_bruteforce(s1, s2)) <= 1e-9
