"""Exception types shared across the package.

The CLI maps these onto its exit codes: ``ParseError`` -> 2,
``DataInvariantError`` -> 3, ``DegenerateFamilyError`` -> 1.
"""


class VerifyLabError(Exception):
    pass


class ParseError(VerifyLabError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DataInvariantError(VerifyLabError, ValueError):
    """Input data violates a structural invariant (e.g. nonzero boundary)."""


class InadmissibleError(VerifyLabError, ValueError):
    """Parameters fall outside the region where an inequality is asserted."""


class DegenerateFamilyError(VerifyLabError, ValueError):
    """Every member of a search family has a vanishing right-hand side."""
