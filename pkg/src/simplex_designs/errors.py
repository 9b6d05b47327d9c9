"""Exception types shared across the package.

The CLI maps these to exit codes: InvariantError -> 1, ParseError -> 2,
InternalCheckError -> 3.
"""


class GroundMismatchError(ValueError):
    """Two operands disagree on the size of the ground set."""


class InvariantError(ValueError):
    """A domain invariant is violated (bad clique, design, matrix, ...)."""


class ParseError(ValueError):
    """An input file or textual value could not be parsed."""


class InternalCheckError(RuntimeError):
    """Two independent computation routes disagree; must abort loudly."""
