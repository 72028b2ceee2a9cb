"""Cantor metric on words, Kantorovich distance under it, and the truncated CK sum.

The Cantor metric uses base ``m`` (the alphabet size): two words whose first
difference is at position ``i`` (1-based) are ``m**-(i - 1)`` apart. The
Cantor-Kantorovich distance between two chains is the discounted series

    d = sum_{i >= 1} (m - 1) / m**i * TV_i

and the first ``k`` terms ``S_k`` bracket it: ``S_k <= d <= S_k + m**-k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .chain import LabeledMarkovChain, check_compatible
from .exceptions import LengthMismatch, NonMonotoneM, OutOfRange, TooLarge
from .traces import iter_levels
from .transport import min_cost_transport

ORACLE_MAX_SUPPORT = 64
ORACLE_MAX_DENOMINATOR = 10**12
MONOTONE_TOL = 1e-12


def cantor_distance(w1: Sequence, w2: Sequence, m: int) -> float:
    """Cantor distance between two finite words of equal length."""
    if len(w1) != len(w2):
        raise LengthMismatch(len(w1), len(w2))
    for i, (a, b) in enumerate(zip(w1, w2)):
        if a != b:
            return 1.0 / m**i
    return 0.0


def discount_weight(i: int, m: int) -> float:
    """Series weight ``(m - 1) / m**i`` of the horizon-``i`` TV term."""
    return (m - 1) / m**i


def kantorovich_closed_form(m_sums: Sequence[float], m: int) -> float:
    """Kantorovich distance between two length-``k`` word distributions under the
    Cantor metric, from their prefix overlap masses ``M_1..M_k``.

    ``M_i`` is the sum over length-``i`` prefixes of the smaller of the two prefix
    probabilities. Mass matched up to depth ``i`` but not ``i + 1`` pays
    ``m**-i``, which gives ``1 - M_1 + sum_{i<k} m**-i (M_i - M_{i+1})``.
    """
    m_sums = [float(x) for x in m_sums]
    if not m_sums:
        raise OutOfRange("m_sums", m_sums, "a non-empty sequence")
    for i, (prev, cur) in enumerate(zip(m_sums, m_sums[1:]), start=1):
        if cur > prev + MONOTONE_TOL:
            raise NonMonotoneM(i, prev, cur)
    total = 1.0 - m_sums[0]
    for i in range(1, len(m_sums)):
        total += (m_sums[i - 1] - m_sums[i]) / m**i
    return total


def _as_word_distribution(p: Mapping) -> dict:
    return {tuple(w): float(x) for w, x in p.items()}


def _word_length(*dists) -> int:
    lengths = {len(w) for d in dists for w in d}
    if len(lengths) > 1:
        a, b = sorted(lengths)[:2]
        raise LengthMismatch(a, b)
    return lengths.pop() if lengths else 0


def prefix_min_sums(p: Mapping, q: Mapping) -> list:
    """``[M_1, ..., M_k]`` for two distributions over words of length ``k``."""
    p, q = _as_word_distribution(p), _as_word_distribution(q)
    k = _word_length(p, q)
    sums = []
    for i in range(1, k + 1):
        pi, qi = {}, {}
        for w, x in p.items():
            pi[w[:i]] = pi.get(w[:i], 0.0) + x
        for w, x in q.items():
            qi[w[:i]] = qi.get(w[:i], 0.0) + x
        sums.append(sum(min(pi.get(u, 0.0), qi.get(u, 0.0)) for u in sorted(set(pi) | set(qi))))
    return sums


def kantorovich_cantor(p: Mapping, q: Mapping, m: int) -> float:
    """Kantorovich distance under the Cantor metric, via the closed form."""
    return kantorovich_closed_form(prefix_min_sums(p, q), m)


@dataclass(frozen=True)
class Coupling:
    """A transport plan between two word distributions.

    ``joint[i, j]`` is the mass moved from ``source_words[i]`` to ``target_words[j]``.
    """

    source_words: tuple
    target_words: tuple
    joint: np.ndarray

    def check(self, p: Mapping, q: Mapping, tol: float = 1e-9) -> bool:
        if (self.joint < 0).any():
            return False
        rows = self.joint.sum(axis=1)
        cols = self.joint.sum(axis=0)
        ok_rows = all(abs(r - p.get(w, 0.0)) <= tol for w, r in zip(self.source_words, rows))
        ok_cols = all(abs(c - q.get(w, 0.0)) <= tol for w, c in zip(self.target_words, cols))
        return ok_rows and ok_cols


def _rationalize(dist: dict, words) -> list:
    values = [Fraction(dist.get(w, 0.0)).limit_denominator(ORACLE_MAX_DENOMINATOR) for w in words]
    total = sum(values, Fraction(0))
    return [v / total for v in values]


def optimal_coupling(p: Mapping, q: Mapping, m: int) -> tuple:
    """Exact optimal transport between ``p`` and ``q`` under the Cantor cost.

    Float inputs are converted to rationals (denominators capped at 10**12) and
    each side is renormalized to total mass exactly 1 before solving.

    Returns ``(cost, coupling)`` with ``cost`` a Fraction.
    """
    p, q = _as_word_distribution(p), _as_word_distribution(q)
    k = _word_length(p, q)
    if m**k > ORACLE_MAX_SUPPORT:
        raise TooLarge(m**k, ORACLE_MAX_SUPPORT)
    words = list(itertools.product(range(m), repeat=k))
    src = [w for w in words if p.get(w, 0.0) > 0]
    dst = [w for w in words if q.get(w, 0.0) > 0]
    supply = _rationalize(p, src)
    demand = _rationalize(q, dst)
    cost = [[_cantor_fraction(a, b, m) for b in dst] for a in src]
    total, flow = min_cost_transport(supply, demand, cost)
    joint = np.array([[float(x) for x in row] for row in flow], dtype=np.float64).reshape(
        len(src), len(dst)
    )
    return total, Coupling(tuple(src), tuple(dst), joint)


def _cantor_fraction(w1, w2, m) -> Fraction:
    for i, (a, b) in enumerate(zip(w1, w2)):
        if a != b:
            return Fraction(1, m**i)
    return Fraction(0)


def kantorovich_oracle(p: Mapping, q: Mapping, m: int) -> float:
    """Kantorovich distance under the Cantor metric by exact linear programming.

    Independent of :func:`kantorovich_closed_form`; restricted to ``m**k <= 64``.
    """
    total, _ = optimal_coupling(p, q, m)
    return float(total)


@dataclass(frozen=True)
class HorizonTerm:
    i: int
    tv: float
    weight: float
    partial_sum: float


@dataclass(frozen=True)
class CkReport:
    """Truncated CK sum with its certified error.

    ``s_k <= d <= s_k + error_bound`` holds whenever ``certified`` is true.
    """

    m: int
    horizon: int
    s_k: float
    error_bound: float
    certified: bool = True
    per_horizon: tuple = field(default_factory=tuple)

    @property
    def interval(self) -> tuple:
        return (self.s_k, self.s_k + self.error_bound)

    def partial_sum(self, i: int) -> float:
        """``S_i`` for ``0 <= i <= horizon``."""
        if i == 0:
            return 0.0
        return self.per_horizon[i - 1].partial_sum

    def tvs(self) -> list:
        return [t.tv for t in self.per_horizon]


def ck_truncated(
    chain1: LabeledMarkovChain,
    chain2: LabeledMarkovChain,
    horizon: int,
    prune_threshold: float = 0.0,
) -> CkReport:
    """Compute ``S_k = sum_{i=1}^k (m - 1) / m**i * TV_i``.

    A positive ``prune_threshold`` drops prefix words whose probability is at most
    the threshold under both chains; the report is then marked uncertified.

    Chains equal by value generate the same trace distributions, so every TV term
    is zero and no prefix tree is built.
    """
    check_compatible(chain1, chain2)
    if horizon < 1:
        raise OutOfRange("horizon", horizon, ">= 1")
    m = chain1.alphabet_size
    if chain1 == chain2:
        tvs = [0.0] * horizon
    else:
        tvs = [lv.tv for lv in iter_levels(chain1, chain2, horizon, prune_threshold)]
    terms = []
    s = 0.0
    for i, tv in enumerate(tvs, start=1):
        w = discount_weight(i, m)
        s += w * tv
        terms.append(HorizonTerm(i, tv, w, s))
    return CkReport(
        m=m,
        horizon=horizon,
        s_k=s,
        error_bound=1.0 / m**horizon,
        certified=prune_threshold <= 0.0,
        per_horizon=tuple(terms),
    )


def horizon_for_precision(epsilon: float, m: int) -> int:
    """Smallest ``k`` with ``m**-k <= epsilon``."""
    if not 0.0 < epsilon < 1.0:
        raise OutOfRange("epsilon", epsilon, "(0, 1)")
    if m < 2:
        raise OutOfRange("m", m, ">= 2")
    eps = Fraction(epsilon)
    k = 1
    while eps * m**k < 1:
        k += 1
    return k
