"""Verification of epsilon-approximate probabilistic bisimulation relations.

For a relation ``R`` between the states of two chains, a product set
``A1 x A2`` is R-closed when ``R(A1) ⊆ A2`` and ``R^-1(A2) ⊆ A1``. The relation
is an epsilon-approximate bisimulation when related states share labels and,
over every R-closed set, both the initial masses and the transition masses out
of each related pair differ by at most epsilon.

Closed sets are enumerated exhaustively, so the chains are limited to 20 states
in total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .chain import LabeledMarkovChain, check_compatible
from .exceptions import (
    LabelMismatch,
    OutOfRange,
    ParseError,
    TooManyStates,
    UnknownState,
)

MAX_TOTAL_STATES = 20
#: Absolute slack on gap comparisons, absorbing floating-point rounding.
GAP_TOL = 1e-12
_CHUNK = 4096


@dataclass(frozen=True)
class BisimRelation:
    """Pairs ``(i1, i2)`` of state indices into the first and second chain."""

    pairs: frozenset

    @classmethod
    def from_names(cls, pairs: Iterable, chain1: LabeledMarkovChain, chain2: LabeledMarkovChain):
        idx = set()
        for a, b in pairs:
            if a not in chain1.states:
                raise UnknownState(a)
            if b not in chain2.states:
                raise UnknownState(b)
            idx.add((chain1.state_index(a), chain2.state_index(b)))
        return cls(frozenset(idx))

    @classmethod
    def identity(cls, chain1: LabeledMarkovChain, chain2: LabeledMarkovChain):
        """Relate equally named states."""
        common = [s for s in chain1.states if s in chain2.states]
        return cls.from_names([(s, s) for s in common], chain1, chain2)

    def sorted_pairs(self) -> list:
        return sorted(self.pairs)

    def names(self, chain1, chain2) -> list:
        return [[chain1.states[i], chain2.states[j]] for i, j in self.sorted_pairs()]


def load_relation(path, chain1: LabeledMarkovChain, chain2: LabeledMarkovChain) -> BisimRelation:
    """Read ``{"pairs": [["v", "v"], ...]}`` with state names of chain1 first."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    pairs = raw.get("pairs") if isinstance(raw, dict) else None
    if not isinstance(pairs, list) or not all(
        isinstance(p, list) and len(p) == 2 for p in pairs
    ):
        raise ParseError("field 'pairs' must be a list of [state1, state2] pairs")
    return BisimRelation.from_names([tuple(p) for p in pairs], chain1, chain2)


def dump_relation(relation: BisimRelation, chain1, chain2, path) -> None:
    Path(path).write_text(
        json.dumps({"pairs": relation.names(chain1, chain2)}) + "\n", encoding="utf-8"
    )


@dataclass(frozen=True)
class ClosedSetPair:
    set1: frozenset
    set2: frozenset


def _guard(chain1, chain2):
    total = chain1.n_states + chain2.n_states
    if total > MAX_TOTAL_STATES:
        raise TooManyStates(total, MAX_TOTAL_STATES)


def _submasks_between(lower: int, upper: int):
    """All masks ``x`` with ``lower ⊆ x ⊆ upper``, ascending."""
    free = upper & ~lower
    bits = [1 << b for b in range(free.bit_length()) if free >> b & 1]
    out = []
    for choice in range(1 << len(bits)):
        x = lower
        for t, bit in enumerate(bits):
            if choice >> t & 1:
                x |= bit
        out.append(x)
    out.sort()
    return out


def _closed_masks(relation: BisimRelation, n1: int, n2: int) -> list:
    image = [0] * n1  # R({s1}) as a bitmask over S2
    preimage = [0] * n2  # R^-1({s2}) as a bitmask over S1
    for i, j in relation.pairs:
        image[i] |= 1 << j
        preimage[j] |= 1 << i
    out = []
    for m1 in range(1 << n1):
        lower = 0
        for i in range(n1):
            if m1 >> i & 1:
                lower |= image[i]
        # s2 may belong to A2 only if everything related to it is in A1
        upper = 0
        for j in range(n2):
            if preimage[j] & ~m1 == 0:
                upper |= 1 << j
        if lower & ~upper:
            continue
        for m2 in _submasks_between(lower, upper):
            out.append((m1, m2))
    return out


def _mask_to_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def enumerate_closed_sets(
    relation: BisimRelation, chain1: LabeledMarkovChain, chain2: LabeledMarkovChain
) -> list:
    """Every R-closed pair ``(A1, A2)``, ordered by the bitmask of ``A1`` then ``A2``."""
    _guard(chain1, chain2)
    masks = _closed_masks(relation, chain1.n_states, chain2.n_states)
    return [ClosedSetPair(_mask_to_set(a), _mask_to_set(b)) for a, b in masks]


@dataclass(frozen=True)
class Witness:
    """A violated condition: ``pair`` is None for the initial-mass condition."""

    closed_set: ClosedSetPair
    pair: tuple | None
    gap: float


@dataclass(frozen=True)
class BisimVerdict:
    accepted: bool
    epsilon: float
    max_gap: float
    witness: Witness | None = None
    label_mismatch: tuple | None = None

    @property
    def exact(self) -> bool:
        """True when every gap is zero, i.e. the relation is an exact bisimulation."""
        return self.label_mismatch is None and self.max_gap == 0.0


def _indicator(masks, n):
    bits = np.arange(n)
    return ((np.asarray(masks, dtype=np.int64)[:, None] >> bits) & 1).astype(np.float64)


def _label_mismatch(relation, chain1, chain2):
    for i, j in relation.sorted_pairs():
        if chain1.labels[chain1.labeling[i]] != chain2.labels[chain2.labeling[j]]:
            return (chain1.states[i], chain2.states[j])
    return None


def _scan(relation, chain1, chain2, epsilon):
    """Return ``(max_gap, first violation or None)`` over all closed sets.

    The first violation is the earliest closed set in enumeration order; within
    it the initial-mass condition comes first, then related pairs in order.
    """
    masks = _closed_masks(relation, chain1.n_states, chain2.n_states)
    pairs = relation.sorted_pairs()
    rows1 = np.array([i for i, _ in pairs], dtype=np.int64)
    rows2 = np.array([j for _, j in pairs], dtype=np.int64)
    max_gap = 0.0
    witness = None
    for start in range(0, len(masks), _CHUNK):
        chunk = masks[start : start + _CHUNK]
        x1 = _indicator([a for a, _ in chunk], chain1.n_states)
        x2 = _indicator([b for _, b in chunk], chain2.n_states)
        init_gap = np.abs(x1 @ chain1.initial - x2 @ chain2.initial)
        if pairs:
            trans_gap = np.abs(
                chain1.transitions[rows1] @ x1.T - chain2.transitions[rows2] @ x2.T
            ).T  # (chunk, pairs)
            gaps = np.concatenate([init_gap[:, None], trans_gap], axis=1)
        else:
            gaps = init_gap[:, None]
        max_gap = max(max_gap, float(gaps.max()))
        if witness is None and epsilon is not None:
            bad = np.argwhere(gaps > epsilon + GAP_TOL)
            if len(bad):
                r, c = bad[0]
                a, b = chunk[r]
                pair = None if c == 0 else (chain1.states[pairs[c - 1][0]], chain2.states[pairs[c - 1][1]])
                witness = Witness(
                    ClosedSetPair(_mask_to_set(a), _mask_to_set(b)), pair, float(gaps[r, c])
                )
    return max_gap, witness


def check_bisim(
    relation: BisimRelation,
    epsilon: float,
    chain1: LabeledMarkovChain,
    chain2: LabeledMarkovChain,
) -> BisimVerdict:
    """Decide whether ``relation`` is an ``epsilon``-approximate bisimulation.

    Gaps are compared against ``epsilon`` with an absolute slack of 1e-12. On
    rejection the verdict carries the first violating closed set.
    """
    if not epsilon >= 0.0:
        raise OutOfRange("epsilon", epsilon, ">= 0")
    check_compatible(chain1, chain2)
    _guard(chain1, chain2)
    mismatch = _label_mismatch(relation, chain1, chain2)
    max_gap, witness = _scan(relation, chain1, chain2, epsilon)
    if mismatch is not None:
        return BisimVerdict(False, epsilon, max_gap, witness, label_mismatch=mismatch)
    return BisimVerdict(witness is None, epsilon, max_gap, witness)


def minimal_epsilon(
    relation: BisimRelation, chain1: LabeledMarkovChain, chain2: LabeledMarkovChain
) -> float:
    """Largest gap over all closed sets: the smallest epsilon the relation meets."""
    check_compatible(chain1, chain2)
    _guard(chain1, chain2)
    mismatch = _label_mismatch(relation, chain1, chain2)
    if mismatch is not None:
        raise LabelMismatch(mismatch)
    max_gap, _ = _scan(relation, chain1, chain2, None)
    return max_gap
