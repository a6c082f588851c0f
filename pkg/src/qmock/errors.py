"""Exception hierarchy shared across the package.

Evaluation-level problems split into three families: structural misuse
(bad conductors, mismatched scales, unknown names), insufficient truncation
(recoverable by re-evaluating at a higher order), and degenerate
specializations (a parameter choice that puts a zero factor somewhere it
cannot be allowed).  The CLI maps these onto its exit codes.
"""

from __future__ import annotations


class QmockError(Exception):
    """Base class for all library errors."""


class IncompatibleConductorsError(QmockError):
    """Arithmetic attempted between Q(i) and Q(w) values."""


class UnsupportedRootOrderError(QmockError):
    """root_of_unity called with an order outside {1, 2, 3, 4, 6}."""


class ScaleMismatchError(QmockError):
    """Series with different exponent scales combined without a rescale."""


class InsufficientOrderError(QmockError):
    """A result was requested beyond the guaranteed truncation order."""

    def __init__(self, needed: int, available: int, message: str = ""):
        self.needed = needed
        self.available = available
        super().__init__(
            message
            or f"requested scaled order {needed} exceeds guaranteed {available}"
        )


class DegenerateSpecializationError(QmockError):
    """A specialization makes some factor vanish where that is not allowed."""


class PoleInTermError(DegenerateSpecializationError):
    """A summand has a zero factor in a reciprocal position."""

    def __init__(self, n: int, detail: str):
        self.n = n
        self.detail = detail
        super().__init__(f"pole in term n={n}: {detail}")


class DivergentTailError(QmockError):
    """A bilateral/unilateral sum is not q-adically convergent."""

    def __init__(self, tail: str, bound: tuple):
        self.tail = tail
        self.bound = bound
        super().__init__(
            f"series not q-adically convergent on the {tail} tail "
            f"(valuation growth {bound})"
        )


class UnknownNameError(QmockError):
    """Lookup of a catalog or registry name failed."""


class ParseError(QmockError):
    """Syntax error in the expression language."""

    def __init__(self, message: str, position: int, line: int, column: int,
                 expected: tuple[str, ...] = ()):
        self.position = position
        self.line = line
        self.column = column
        self.expected = expected
        hint = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at line {line}, column {column}{hint}")


class UnboundVariableError(QmockError):
    """An expression refers to a free variable without a binding."""
