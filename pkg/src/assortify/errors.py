"""Error taxonomy shared by every layer (library, CLI, HTTP service).

Each exception carries a machine-readable ``kind`` so the service can map
failures to structured 4xx payloads and the CLI to diagnostics.
"""

from __future__ import annotations


class AssortifyError(Exception):
    """Base class for all domain errors."""

    kind: str = "Error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UnknownFabric(AssortifyError):
    kind = "UnknownFabric"


class BlendNotNormalized(AssortifyError):
    kind = "BlendNotNormalized"


class EmptyAssortment(AssortifyError):
    kind = "EmptyAssortment"


class EmptyCatalog(AssortifyError):
    kind = "EmptyCatalog"


class EmptyMatrix(AssortifyError):
    kind = "EmptyMatrix"


class SingularSystem(AssortifyError):
    kind = "SingularSystem"


class DimensionMismatch(AssortifyError):
    kind = "DimensionMismatch"


class NonPositiveTrend(AssortifyError):
    kind = "NonPositiveTrend"


class ZeroDemandStore(AssortifyError):
    kind = "ZeroDemandStore"


class InsufficientCandidates(AssortifyError):
    kind = "InsufficientCandidates"


class InvalidLocks(AssortifyError):
    kind = "InvalidLocks"


class InstanceTooLarge(AssortifyError):
    kind = "InstanceTooLarge"


class EmptyInput(AssortifyError):
    kind = "EmptyInput"


class InvalidConfig(AssortifyError):
    kind = "InvalidConfig"


class CatalogInvalid(AssortifyError):
    """Raised when an assembled catalog fails validation; carries the issues."""

    kind = "CatalogInvalid"

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(f"{i.kind}({i.subject}): {i.message}" for i in self.issues)
        super().__init__(f"catalog failed validation: {lines}")


class ParseError(AssortifyError):
    """Input-file error pinned to file, 1-based row, and column.

    ``kind`` defaults to the class name but a more specific reason kind
    (e.g. ``NegativeIndex``) may be passed per instance.
    """

    kind = "ParseError"

    def __init__(self, file: str, row: int, column: str, reason: str, kind: str | None = None):
        self.file = file
        self.row = row
        self.column = column
        self.reason = reason
        if kind is not None:
            self.kind = kind
        super().__init__(f"{file}:{row} column '{column}': {reason}")


class DuplicateFabric(ParseError):
    kind = "DuplicateFabric"


class DuplicateProduct(ParseError):
    kind = "DuplicateProduct"


class DuplicateStore(ParseError):
    kind = "DuplicateStore"


class UnknownProduct(ParseError):
    kind = "UnknownProduct"


class UnknownStore(ParseError):
    kind = "UnknownStore"


class NegativeUnits(ParseError):
    kind = "NegativeUnits"
