"""Labeled Markov chains: the validated value type, file I/O and the Onegin example."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .exceptions import (
    AlphabetMismatch,
    AlphabetTooSmall,
    BadInitialMass,
    InvalidProbability,
    NonStochasticRow,
    OutOfRange,
    ParseError,
    UnknownLabel,
)

#: Absolute tolerance on row sums and on the initial mass.
STOCHASTIC_TOL = 1e-9

ONEGIN_TRANSITIONS = ((0.128, 0.872), (0.663, 0.337))
ONEGIN_INITIAL = (0.5, 0.5)
MAX_ONEGIN_BIAS = 0.128


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ParseError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LabeledMarkovChain:
    """A finite labeled Markov chain.

    Construction validates the chain; no renormalization is ever applied.

    Parameters
    ----------
    states : sequence of str
        State names. Their order fixes every index used below.
    labels : sequence of str
        The ordered alphabet; ``m = len(labels)`` must be at least 2.
    initial : array_like, shape (n,)
        Initial distribution over states.
    transitions : array_like, shape (n, n)
        Row-stochastic transition matrix.
    labeling : sequence of int, shape (n,)
        Index into ``labels`` for every state.
    """

    states: tuple
    labels: tuple
    initial: np.ndarray
    transitions: np.ndarray
    labeling: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        object.__setattr__(self, "labels", tuple(str(a) for a in self.labels))
        object.__setattr__(self, "initial", _frozen(self.initial, 1))
        object.__setattr__(self, "transitions", _frozen(self.transitions, 2))
        labeling = np.array(self.labeling, dtype=np.int64)
        labeling.setflags(write=False)
        object.__setattr__(self, "labeling", labeling)
        self._check()

    def _check(self):
        n = len(self.states)
        m = len(self.labels)
        if n == 0:
            raise ParseError("a chain needs at least one state")
        if len(set(self.states)) != n:
            raise ParseError("state names must be unique")
        if len(set(self.labels)) != m:
            raise ParseError("label symbols must be unique")
        if m < 2:
            raise AlphabetTooSmall(m)
        if self.initial.shape != (n,):
            raise ParseError(f"initial has shape {self.initial.shape}, expected ({n},)")
        if self.transitions.shape != (n, n):
            raise ParseError(
                f"transitions has shape {self.transitions.shape}, expected ({n}, {n})"
            )
        if self.labeling.shape != (n,):
            raise ParseError(f"labeling has shape {self.labeling.shape}, expected ({n},)")
        for s, a in zip(self.states, self.labeling):
            if not 0 <= a < m:
                raise UnknownLabel(s, int(a))
        for s, x in zip(self.states, self.initial):
            if not 0.0 <= x <= 1.0:
                raise InvalidProbability(f"initial[{s}]", float(x))
        for s, row in zip(self.states, self.transitions):
            for t, x in zip(self.states, row):
                if not 0.0 <= x <= 1.0:
                    raise InvalidProbability(f"transitions[{s}][{t}]", float(x))
        total = math.fsum(self.initial)
        if abs(total - 1.0) > STOCHASTIC_TOL:
            raise BadInitialMass(total)
        for s, row in zip(self.states, self.transitions):
            total = math.fsum(row)
            if abs(total - 1.0) > STOCHASTIC_TOL:
                raise NonStochasticRow(s, total)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def alphabet_size(self) -> int:
        return len(self.labels)

    def label_masks(self) -> np.ndarray:
        """Boolean matrix of shape (m, n); row ``a`` flags the states labeled ``a``."""
        return self.labeling[None, :] == np.arange(self.alphabet_size)[:, None]

    def state_index(self, name: str) -> int:
        return self.states.index(name)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "states": [
                {"name": s, "label": self.labels[a]}
                for s, a in zip(self.states, self.labeling)
            ],
            "initial": [float(x) for x in self.initial],
            "transitions": [[float(x) for x in row] for row in self.transitions],
        }

    def __eq__(self, other):
        if not isinstance(other, LabeledMarkovChain):
            return NotImplemented
        return (
            self.states == other.states
            and self.labels == other.labels
            and np.array_equal(self.initial, other.initial)
            and np.array_equal(self.transitions, other.transitions)
            and np.array_equal(self.labeling, other.labeling)
        )

    __hash__ = None


def check_compatible(chain1: LabeledMarkovChain, chain2: LabeledMarkovChain) -> tuple:
    """Return the shared alphabet, raising AlphabetMismatch unless both chains use
    the same labels in the same order."""
    if chain1.labels != chain2.labels:
        raise AlphabetMismatch(chain1.labels, chain2.labels)
    return chain1.labels


def _require(raw: Mapping, key: str):
    try:
        return raw[key]
    except KeyError:
        raise ParseError(f"missing field {key!r}") from None


def validate(raw: Mapping[str, Any]) -> LabeledMarkovChain:
    """Build a chain from its JSON-shaped description (see ``load_chain``)."""
    if not isinstance(raw, Mapping):
        raise ParseError("chain description must be a JSON object")
    labels = _require(raw, "labels")
    states = _require(raw, "states")
    initial = _require(raw, "initial")
    transitions = _require(raw, "transitions")
    if not isinstance(labels, list) or not all(isinstance(a, str) for a in labels):
        raise ParseError("field 'labels' must be a list of strings")
    if not isinstance(states, list):
        raise ParseError("field 'states' must be a list")
    names, labeling = [], []
    for i, entry in enumerate(states):
        if not isinstance(entry, Mapping) or "name" not in entry or "label" not in entry:
            raise ParseError(f"states[{i}] must be an object with 'name' and 'label'")
        name, label = str(entry["name"]), entry["label"]
        if label not in labels:
            raise UnknownLabel(name, label)
        names.append(name)
        labeling.append(labels.index(label))
    try:
        initial = np.asarray(initial, dtype=np.float64)
        transitions = np.asarray(transitions, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric probability: {exc}") from None
    return LabeledMarkovChain(names, labels, initial, transitions, labeling)


def load_chain(path) -> LabeledMarkovChain:
    """Read a chain file.

    The file is a UTF-8 JSON object::

        {"labels": ["V", "C"],
         "states": [{"name": "v", "label": "V"}, {"name": "c", "label": "C"}],
         "initial": [0.5, 0.5],
         "transitions": [[0.128, 0.872], [0.663, 0.337]]}
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return validate(raw)


def dumps_chain(chain: LabeledMarkovChain) -> str:
    return json.dumps(chain.to_dict(), indent=2) + "\n"


def dump_chain(chain: LabeledMarkovChain, path) -> None:
    Path(path).write_text(dumps_chain(chain), encoding="utf-8")


def bias_onegin(epsilon: float) -> LabeledMarkovChain:
    """Markov's vowel/consonant chain for Eugene Onegin, with every transition
    probability shifted by ``epsilon`` (``epsilon = 0`` gives the original chain).
    """
    if not 0.0 <= epsilon <= MAX_ONEGIN_BIAS:
        raise OutOfRange("epsilon", epsilon, f"[0, {MAX_ONEGIN_BIAS}]")
    (vv, vc), (cv, cc) = ONEGIN_TRANSITIONS
    transitions = [[vv + epsilon, vc - epsilon], [cv + epsilon, cc - epsilon]]
    return LabeledMarkovChain(
        states=("v", "c"),
        labels=("V", "C"),
        initial=ONEGIN_INITIAL,
        transitions=transitions,
        labeling=(0, 1),
    )


def onegin() -> LabeledMarkovChain:
    return bias_onegin(0.0)


def random_chain(
    rng: np.random.Generator,
    n_states: int,
    m: int,
    labels: Sequence[str] | None = None,
    sparsity: float = 0.0,
) -> LabeledMarkovChain:
    """Draw a chain with Dirichlet rows and uniformly random labels.

    ``sparsity`` is the probability of zeroing a transition entry (the diagonal
    entry is kept so every row stays stochastic).
    """
    if labels is None:
        labels = [chr(ord("a") + i) for i in range(m)]
    initial = rng.dirichlet(np.ones(n_states))
    transitions = rng.dirichlet(np.ones(n_states), size=n_states)
    if sparsity > 0:
        keep = rng.random((n_states, n_states)) >= sparsity
        np.fill_diagonal(keep, True)
        transitions = transitions * keep
        transitions /= transitions.sum(axis=1, keepdims=True)
    labeling = rng.integers(0, m, size=n_states)
    return LabeledMarkovChain(
        states=[f"s{i}" for i in range(n_states)],
        labels=labels,
        initial=initial,
        transitions=transitions,
        labeling=labeling,
    )
