"""Exception hierarchy shared across the package.

Every error the CLI maps to an exit code lives here so command handlers can
catch one base class per code.
"""


class Error(Exception):
    """Base class for all package errors."""


class ValidationError(Error, ValueError):
    """Malformed value, config, or input file (CLI exit code 2)."""


class ParseError(ValidationError):
    """Unreadable input file; message names the offending line or field."""


class InvalidAgentError(ValidationError):
    """Agent id not present in the epistemic model."""


class SpaceTooLargeError(ValidationError):
    """Outcome space exceeds the exhaustive-search guard."""


class UnknownStateError(ValidationError):
    """State label not present in the prior."""


class ImpossibleContextError(ValidationError):
    """Context has zero likelihood in every state; posterior undefined."""


class NotTwoStatesError(ValidationError):
    """Operation requires exactly the two states labeled A and B."""


class MislabeledStatesError(ValidationError):
    """State labels are inconsistent with the A-supports-larger-revolts
    convention; relabel and rerun (or use auto-relabel)."""


class NotGraphicalError(ValidationError):
    """Degree sequence is not realizable by a simple graph."""


class GenerationError(Error, RuntimeError):
    """A seeded generator exhausted its retry budget."""


class BudgetExceededError(Error, RuntimeError):
    """Exhaustive-enumeration cost above the configured budget
    (CLI exit code 3)."""
