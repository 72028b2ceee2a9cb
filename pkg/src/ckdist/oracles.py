"""Brute-force reference computations, deliberately naive.

These enumerate every state path explicitly and share no code with the prefix
tree in :mod:`ckdist.traces`; the test suite uses them to check it.
"""

from __future__ import annotations

import itertools
import math

from .chain import LabeledMarkovChain


def path_distribution(chain: LabeledMarkovChain, k: int) -> dict:
    """Trace distribution over words of length ``k``, summing
    ``mu(s_1) P(s_1, s_2) ... P(s_{k-1}, s_k)`` over all ``n**k`` state paths."""
    mu = [float(x) for x in chain.initial]
    P = [[float(x) for x in row] for row in chain.transitions]
    lab = [int(a) for a in chain.labeling]
    n = chain.n_states
    terms = {}
    for path in itertools.product(range(n), repeat=k):
        prob = mu[path[0]]
        for s, t in zip(path, path[1:]):
            prob *= P[s][t]
        word = tuple(lab[s] for s in path)
        terms.setdefault(word, []).append(prob)
    return {w: math.fsum(v) for w, v in terms.items()}


def tv_half_sum(p: dict, q: dict) -> float:
    return 0.5 * math.fsum(abs(p.get(w, 0.0) - q.get(w, 0.0)) for w in set(p) | set(q))


def ck_partial_sums(chain1: LabeledMarkovChain, chain2: LabeledMarkovChain, k: int) -> list:
    """``[S_1, ..., S_k]`` from path-enumerated distributions."""
    m = len(chain1.labels)
    sums, total = [], 0.0
    for i in range(1, k + 1):
        tv = tv_half_sum(path_distribution(chain1, i), path_distribution(chain2, i))
        total += (m - 1) / m**i * tv
        sums.append(total)
    return sums
