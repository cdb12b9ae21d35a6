"""Exception types shared across the package."""

from __future__ import annotations


class OpacityError(Exception):
    """Base class for every error this package raises on purpose."""


class UnknownTransition(OpacityError):
    """A transition id does not belong to the net."""


class NotEnabled(OpacityError):
    """A transition (or a step of a sequence) is not enabled.

    ``index`` is the position of the failing transition when raised from a
    sequence, or None for a single firing.
    """

    def __init__(self, transition: str, index: int | None = None):
        self.transition = transition
        self.index = index
        at = f" at index {index}" if index is not None else ""
        super().__init__(f"transition {transition!r} not enabled{at}")


class BoundExceeded(OpacityError):
    """State-space exploration hit a configured cap.

    ``kind`` is "states" or "tokens"; hitting either signals a (potentially)
    unbounded net rather than an internal failure.
    """

    def __init__(self, kind: str, limit: int):
        self.kind = kind
        self.limit = limit
        super().__init__(f"exploration exceeded the {kind} bound ({limit})")


class CyclicUnobservableSubnet(OpacityError):
    """The subnet induced by the unobservable transitions has a directed cycle."""


class EmptyInitial(OpacityError):
    """Subset construction was started from an empty state set."""


class SecretClosureRequired(OpacityError):
    """A decision procedure was invoked without a clean secret-closure report.

    Verdicts computed on the basis reachability graph are only meaningful
    when every secret basis marking keeps its whole unobservable reach inside
    the secret; callers must run that check first and pass its report along.
    """


class NoViolation(OpacityError):
    """Witness extraction was asked for on an opaque verdict."""


class ParseError(OpacityError):
    """The net document is syntactically malformed.

    ``location`` names the offending field (or line/column for raw JSON
    errors) to make reports actionable.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        where = f"{location}: " if location else ""
        super().__init__(f"{where}{message}")


class SemanticError(OpacityError):
    """The net document is well-formed but internally inconsistent."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        where = f"{location}: " if location else ""
        super().__init__(f"{where}{message}")
