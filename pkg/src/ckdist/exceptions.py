"""Error types.

Every error carries an ``exit_code`` used by the command-line interface:
1 for I/O and parse failures, 2 for invalid input, 3 for computation guards.
"""


class CKDistError(Exception):
    exit_code = 2


class ParseError(CKDistError):
    """Malformed file or chain description."""

    exit_code = 1


class ValidationError(CKDistError, ValueError):
    exit_code = 2


class NonStochasticRow(ValidationError):
    def __init__(self, state, total):
        self.state = state
        self.total = total
        super().__init__(f"NonStochasticRow: row of state {state!r} sums to {total!r}")


class BadInitialMass(ValidationError):
    def __init__(self, total):
        self.total = total
        super().__init__(f"BadInitialMass: initial distribution sums to {total!r}")


class InvalidProbability(ValidationError):
    def __init__(self, where, value):
        self.where = where
        self.value = value
        super().__init__(f"InvalidProbability: {where} = {value!r} is not in [0, 1]")


class UnknownLabel(ValidationError):
    def __init__(self, state, label=None):
        self.state = state
        self.label = label
        super().__init__(f"UnknownLabel: state {state!r} has label {label!r} outside the alphabet")


class AlphabetTooSmall(ValidationError):
    def __init__(self, m):
        self.m = m
        super().__init__(f"AlphabetTooSmall: alphabet has {m} label(s), at least 2 required")


class AlphabetMismatch(ValidationError):
    def __init__(self, labels1, labels2):
        self.labels1 = tuple(labels1)
        self.labels2 = tuple(labels2)
        super().__init__(
            f"AlphabetMismatch: {list(self.labels1)} vs {list(self.labels2)}"
        )


class LabelMismatch(ValidationError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"LabelMismatch: related states {pair!r} carry different labels")


class UnknownState(ValidationError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"UnknownState: {name!r}")


class OutOfRange(ValidationError):
    def __init__(self, name, value, expected):
        self.name = name
        self.value = value
        super().__init__(f"OutOfRange: {name}={value!r}, expected {expected}")


class LengthMismatch(ValidationError):
    def __init__(self, n1, n2):
        super().__init__(f"LengthMismatch: lengths {n1} and {n2} differ")


class NonMonotoneM(ValidationError):
    def __init__(self, index, prev, cur):
        self.index = index
        super().__init__(
            f"NonMonotoneM: M_{index + 1}={cur!r} exceeds M_{index}={prev!r}"
        )


class GuardError(CKDistError):
    """A computation was refused because it exceeds a configured scale limit."""

    exit_code = 3


class NodeBudgetExceeded(GuardError):
    def __init__(self, requested, cap):
        self.requested = requested
        self.cap = cap
        super().__init__(
            f"NodeBudgetExceeded: {requested} prefix words requested, cap is {cap}"
        )


class TooLarge(GuardError):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"TooLarge: size {size} exceeds limit {limit}")


class TooManyStates(GuardError):
    def __init__(self, n_states, limit):
        self.n_states = n_states
        self.limit = limit
        super().__init__(
            f"TooManyStates: {n_states} states in total, enumeration limit is {limit}"
        )
