"""Joint prefix-tree enumeration of the trace distributions of two chains.

A level at horizon ``i`` holds every length-``i`` word that has positive
probability under at least one chain, together with the per-state mass vectors
``mass_j[w][s] = P(first i labels are w and state i is s)``. Summing a mass
vector gives the trace probability ``p_j^i(w)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .chain import LabeledMarkovChain, check_compatible
from .exceptions import NodeBudgetExceeded, OutOfRange

DEFAULT_NODE_BUDGET = 2**22
NODE_BUDGET_ENV = "CKDIST_NODE_BUDGET"


def node_budget() -> int:
    """Live-word cap; ``CKDIST_NODE_BUDGET`` overrides the default of 2**22."""
    value = os.environ.get(NODE_BUDGET_ENV)
    if value is None or value == "":
        return DEFAULT_NODE_BUDGET
    cap = int(value)
    if cap < 1:
        raise OutOfRange(NODE_BUDGET_ENV, cap, ">= 1")
    return cap


def _word_dtype(m: int):
    return np.uint8 if m <= 256 else np.int32


@dataclass(frozen=True)
class PrefixLevel:
    """One level of the joint prefix tree.

    Attributes
    ----------
    horizon : int
        Word length ``i``.
    words : ndarray of unsigned int, shape (W, i)
        Surviving words as label indices, in lexicographic order.
    mass1, mass2 : ndarray, shape (W, n1) and (W, n2)
        Per-state masses for each word under the two chains.
    p1, p2 : ndarray, shape (W,)
        Trace probabilities ``p_j^i(w)``.
    m_sum : float
        ``M_i``, the sum over words of ``min(p1, p2)``.
    tv : float
        Total-variation distance between the two trace distributions, computed
        as ``(T1 + T2) / 2 - M_i`` with ``T_j`` the total mass of chain ``j``.
        This equals ``1 - M_i`` for normalized masses and is exactly zero when
        both chains produce bitwise identical masses.
    pruned_mass : float
        Largest per-chain probability mass discarded by threshold pruning so far.
    complete : bool
        False once any word with positive mass has been pruned.
    """

    horizon: int
    m: int
    words: np.ndarray
    mass1: np.ndarray
    mass2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    m_sum: float
    tv: float
    pruned_mass: float = 0.0
    complete: bool = True

    def __len__(self):
        return len(self.words)

    def entries(self):
        """Yield ``(word, mass1, mass2)`` in storage order."""
        for w, a, b in zip(self.words, self.mass1, self.mass2):
            yield tuple(int(x) for x in w), a, b

    def distribution(self, which: int) -> dict:
        """Trace distribution of chain ``which`` (1 or 2) as ``{word: probability}``."""
        p = self.p1 if which == 1 else self.p2
        return {tuple(int(x) for x in w): float(x) for w, x in zip(self.words, p)}


def _make_level(horizon, m, words, mass1, mass2, threshold, pruned_mass, complete):
    p1 = mass1.sum(axis=1)
    p2 = mass2.sum(axis=1)
    if threshold > 0.0:
        keep = (p1 > threshold) | (p2 > threshold)
        dropped = ~keep & ((p1 > 0.0) | (p2 > 0.0))
        if dropped.any():
            complete = False
            pruned_mass = max(pruned_mass, float(p1[dropped].sum()), float(p2[dropped].sum()))
    else:
        keep = (p1 > 0.0) | (p2 > 0.0)
    if not keep.all():
        words, mass1, mass2, p1, p2 = words[keep], mass1[keep], mass2[keep], p1[keep], p2[keep]
    m_sum = float(np.minimum(p1, p2).sum())
    tv = 0.5 * (float(p1.sum()) + float(p2.sum())) - m_sum
    tv = min(max(tv, 0.0), 1.0)
    for arr in (words, mass1, mass2, p1, p2):
        arr.setflags(write=False)
    return PrefixLevel(
        horizon=horizon,
        m=m,
        words=words,
        mass1=mass1,
        mass2=mass2,
        p1=p1,
        p2=p2,
        m_sum=m_sum,
        tv=tv,
        pruned_mass=pruned_mass,
        complete=complete,
    )


def initial_level(
    chain1: LabeledMarkovChain,
    chain2: LabeledMarkovChain,
    prune_threshold: float = 0.0,
) -> PrefixLevel:
    """Horizon-1 level: one word per label with mass ``mu_j`` restricted to the
    states carrying that label."""
    check_compatible(chain1, chain2)
    m = chain1.alphabet_size
    if m > node_budget():
        raise NodeBudgetExceeded(m, node_budget())
    mass1 = chain1.label_masks() * chain1.initial[None, :]
    mass2 = chain2.label_masks() * chain2.initial[None, :]
    words = np.arange(m, dtype=_word_dtype(m))[:, None]
    return _make_level(1, m, words, mass1, mass2, prune_threshold, 0.0, True)


def extend(
    level: PrefixLevel,
    chain1: LabeledMarkovChain,
    chain2: LabeledMarkovChain,
    prune_threshold: float = 0.0,
) -> PrefixLevel:
    """Append every label to every surviving word of ``level``.

    Raises NodeBudgetExceeded when ``len(level) * m`` child words would exceed the
    live-word cap.
    """
    m = level.m
    requested = len(level) * m
    cap = node_budget()
    if requested > cap:
        raise NodeBudgetExceeded(requested, cap)
    masks1 = chain1.label_masks()
    masks2 = chain2.label_masks()
    step1 = level.mass1 @ chain1.transitions
    step2 = level.mass2 @ chain2.transitions
    # (W, m, n) -> (W*m, n): children of each word stay contiguous, in label order
    mass1 = (step1[:, None, :] * masks1[None, :, :]).reshape(requested, chain1.n_states)
    mass2 = (step2[:, None, :] * masks2[None, :, :]).reshape(requested, chain2.n_states)
    words = np.empty((requested, level.horizon + 1), dtype=level.words.dtype)
    words[:, :-1] = np.repeat(level.words, m, axis=0)
    words[:, -1] = np.tile(np.arange(m, dtype=level.words.dtype), len(level))
    return _make_level(
        level.horizon + 1,
        m,
        words,
        mass1,
        mass2,
        prune_threshold,
        level.pruned_mass,
        level.complete,
    )


def iter_levels(chain1, chain2, horizon: int, prune_threshold: float = 0.0):
    """Yield the levels for horizons ``1..horizon``."""
    if horizon < 1:
        return
    level = initial_level(chain1, chain2, prune_threshold)
    yield level
    for _ in range(horizon - 1):
        level = extend(level, chain1, chain2, prune_threshold)
        yield level


def level_at(chain1, chain2, horizon: int, prune_threshold: float = 0.0) -> PrefixLevel:
    if horizon < 1:
        raise OutOfRange("horizon", horizon, ">= 1")
    for level in iter_levels(chain1, chain2, horizon, prune_threshold):
        pass
    return level


def tv_direct(level: PrefixLevel) -> float:
    """Half the l1 distance between the two trace distributions of ``level``."""
    return 0.5 * float(np.abs(level.p1 - level.p2).sum())


def tv_sequence(chain1, chain2, horizon: int) -> list:
    """``[TV_1, ..., TV_horizon]`` between the two chains."""
    return [level.tv for level in iter_levels(chain1, chain2, horizon)]
