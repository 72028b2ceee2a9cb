"""Product distributions over {0,1}^k encoded as labeled Markov chains, and three
independent routes to the TV distance between two product distributions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .chain import LabeledMarkovChain
from .distances import ck_truncated, discount_weight
from .exceptions import LengthMismatch, OutOfRange, TooLarge

BRUTEFORCE_MAX_K = 20
LINEAR_SYSTEM_MAX_K = 12


@dataclass(frozen=True)
class ProductSpec:
    """Independent coordinates: ``params[i]`` is the probability that bit ``i`` is 1."""

    params: tuple

    def __post_init__(self):
        params = tuple(float(x) for x in self.params)
        if not params:
            raise OutOfRange("params", params, "at least one parameter")
        for i, x in enumerate(params):
            if not 0.0 <= x <= 1.0:
                raise OutOfRange(f"params[{i}]", x, "[0, 1]")
        object.__setattr__(self, "params", params)

    @classmethod
    def parse(cls, text: str) -> "ProductSpec":
        """Parse comma-separated decimals such as ``"0.3,0.9"``."""
        try:
            return cls(tuple(float(t) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise OutOfRange("params", text, "comma-separated decimals") from exc

    @property
    def k(self) -> int:
        return len(self.params)

    def prefix(self, i: int) -> "ProductSpec":
        return ProductSpec(self.params[:i])

    def probabilities(self) -> np.ndarray:
        """Probabilities of all ``2**k`` outcomes, indexed by the bits read as a
        binary number with the first coordinate most significant."""
        if self.k > BRUTEFORCE_MAX_K:
            raise TooLarge(self.k, BRUTEFORCE_MAX_K)
        probs = np.ones(1)
        for x in self.params:
            probs = np.outer(probs, [1.0 - x, x]).ravel()
        return probs


def encode_product(spec: ProductSpec) -> LabeledMarkovChain:
    """Chain over labels ``("0", "1")`` whose length-``i`` traces follow the product
    of the first ``i`` parameters for ``i <= k``; afterwards it emits 0 forever.

    States are ``0_1..0_k, 1_1..1_k``; ``b_i`` carries label ``b`` and is visited
    at step ``i``.
    """
    k = spec.k
    p = spec.params
    zero = lambda i: i - 1  # noqa: E731
    one = lambda i: k + i - 1  # noqa: E731
    initial = np.zeros(2 * k)
    initial[zero(1)] = 1.0 - p[0]
    initial[one(1)] = p[0]
    transitions = np.zeros((2 * k, 2 * k))
    for i in range(2, k + 1):
        for src in (zero(i - 1), one(i - 1)):
            transitions[src, one(i)] = p[i - 1]
            transitions[src, zero(i)] = 1.0 - p[i - 1]
    transitions[zero(k), zero(k)] = 1.0
    transitions[one(k), zero(k)] = 1.0
    states = [f"0_{i}" for i in range(1, k + 1)] + [f"1_{i}" for i in range(1, k + 1)]
    return LabeledMarkovChain(
        states=states,
        labels=("0", "1"),
        initial=initial,
        transitions=transitions,
        labeling=[0] * k + [1] * k,
    )


def _check_pair(spec1: ProductSpec, spec2: ProductSpec):
    if spec1.k != spec2.k:
        raise LengthMismatch(spec1.k, spec2.k)


def product_tv_bruteforce(spec1: ProductSpec, spec2: ProductSpec) -> float:
    """Half the l1 distance between the two product distributions, summed over
    all ``2**k`` outcomes."""
    _check_pair(spec1, spec2)
    return 0.5 * float(np.abs(spec1.probabilities() - spec2.probabilities()).sum())


def tv_via_sk_difference(spec1: ProductSpec, spec2: ProductSpec, k: int | None = None) -> float:
    """Recover ``TV_k`` from two consecutive truncated CK sums of the encoder
    chains: ``TV_k = m**k (S_k - S_{k-1}) / (m - 1)``."""
    _check_pair(spec1, spec2)
    k = spec1.k if k is None else k
    if k != spec1.k:
        raise LengthMismatch(k, spec1.k)
    report = ck_truncated(encode_product(spec1), encode_product(spec2), k)
    m = report.m
    return m**k * (report.partial_sum(k) - report.partial_sum(k - 1)) / (m - 1)


def tv_via_linear_system(spec1: ProductSpec, spec2: ProductSpec, k: int | None = None) -> float:
    """Recover ``TV_k`` from the CK distances ``d_1..d_k`` of the prefix encoders.

    For encoders of the first ``i`` parameters the TV terms are constant past
    horizon ``i``, so ``d_i = S_i + m**-i TV_i`` exactly. The vector ``d`` is a
    lower-triangular transform of ``(TV_1, ..., TV_k)`` with off-diagonal entries
    ``(m - 1) / m**j`` and diagonal ``m**(1 - i)``; forward substitution inverts it.
    """
    _check_pair(spec1, spec2)
    k = spec1.k if k is None else k
    if k != spec1.k:
        raise LengthMismatch(k, spec1.k)
    if k > LINEAR_SYSTEM_MAX_K:
        raise TooLarge(k, LINEAR_SYSTEM_MAX_K)
    d = np.empty(k)
    m = 2
    for i in range(1, k + 1):
        report = ck_truncated(encode_product(spec1.prefix(i)), encode_product(spec2.prefix(i)), i)
        m = report.m
        d[i - 1] = report.s_k + report.per_horizon[-1].tv / m**i
    system = np.zeros((k, k))
    for i in range(1, k + 1):
        for j in range(1, i):
            system[i - 1, j - 1] = discount_weight(j, m)
        system[i - 1, i - 1] = 1.0 / m ** (i - 1)
    tvs = solve_triangular(system, d, lower=True)
    return float(tvs[-1])


def product_word_probability(spec: ProductSpec, word: Sequence[int]) -> float:
    """Probability of the first ``len(word)`` coordinates equalling ``word``."""
    prob = 1.0
    for x, b in zip(spec.params, word):
        prob *= x if b else 1.0 - x
    return prob
