"""
errors.py

Exception hierarchy shared by every module of the toolkit. The CLI maps
these onto exit codes (see the EXIT_* constants in kneser_morse.py).
"""

from typing import Any, Optional


class KneserMorseError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(KneserMorseError, ValueError):
    """A family parameter or argument is out of range."""


class SizeError(KneserMorseError):
    """A configured budget was exceeded."""

    def __init__(self, budget_name: str, budget: int, message: str = ""):
        self.budget_name = budget_name
        self.budget = budget
        super().__init__(
            message or f"{budget_name} exceeded (budget {budget})"
        )


class ContractError(KneserMorseError):
    """A precondition of an operation does not hold."""


class FormatError(KneserMorseError):
    """An artifact file could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ScriptError(KneserMorseError):
    """A matching-tree step failed validation."""

    def __init__(self, path: str, step_index: int, violation: str,
                 note: str = ""):
        self.path = path
        self.step_index = step_index
        self.violation = violation
        self.note = note
        where = f" ({note})" if note else ""
        super().__init__(
            f"step {step_index} at node '{path or 'root'}'{where}: {violation}"
        )


class IncompleteTreeError(KneserMorseError):
    """A sink leaf with |Sigma| >= 2 was left unprocessed."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"leaf '{path or 'root'}' still has |Sigma| >= 2")


class SearchError(KneserMorseError):
    """The matching-tree search ran out of node budget."""

    def __init__(self, message: str, best: Optional[Any] = None):
        self.best = best
        super().__init__(message)


class PartitionError(KneserMorseError):
    """A face fell into no grade (or into two) of a case table."""

    def __init__(self, message: str, face: Any = None):
        self.face = face
        super().__init__(message)


class OrderError(KneserMorseError):
    """A grading is not order-preserving; carries the witness pair."""

    def __init__(self, smaller: Any, larger: Any, message: str = ""):
        self.smaller = smaller
        self.larger = larger
        super().__init__(
            message or f"grade({smaller}) > grade({larger}) although {smaller} < {larger}"
        )


class AuditError(KneserMorseError):
    """A per-grade matching failed its audit."""

    def __init__(self, grade: Any, message: str):
        self.grade = grade
        super().__init__(f"grade {grade}: {message}")
