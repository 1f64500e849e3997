"""Exception types shared across the engine.

Every error raised on a user-facing path derives from FuzzyLatticeError so
callers (CLI, HTTP facade) can distinguish engine diagnostics from bugs.
"""

from __future__ import annotations


class FuzzyLatticeError(Exception):
    """Base class for all engine errors."""


class OutOfUniverseError(FuzzyLatticeError):
    """A crisp value lies outside its variable's universe."""

    def __init__(self, variable: str, value: float, lo: float, hi: float):
        super().__init__(
            f"value {value!r} for '{variable}' is outside the universe [{lo}, {hi}]"
        )
        self.variable = variable
        self.value = value
        self.lo = lo
        self.hi = hi


class UnknownTermError(FuzzyLatticeError):
    """A term name does not belong to the variable it was used with."""

    def __init__(self, variable: str, term: str, known: tuple[str, ...] = ()):
        msg = f"variable '{variable}' has no term '{term}'"
        if known:
            msg += f" (terms: {', '.join(known)})"
        super().__init__(msg)
        self.variable = variable
        self.term = term


class UnknownAttributeError(FuzzyLatticeError):
    """An attribute name is not declared (or not part of the active phase)."""

    def __init__(self, attribute: str, detail: str = "is not declared"):
        super().__init__(f"attribute '{attribute}' {detail}")
        self.attribute = attribute


class UnknownDiseaseError(FuzzyLatticeError):
    def __init__(self, disease: str):
        super().__init__(f"disease '{disease}' is not declared")
        self.disease = disease


class UnknownPhaseError(FuzzyLatticeError):
    def __init__(self, index: int):
        super().__init__(f"phase {index} is not declared in the knowledge base")
        self.index = index


class MissingInputError(FuzzyLatticeError):
    """A rule clause references an attribute with no fuzzified input."""

    def __init__(self, attribute: str):
        super().__init__(f"no input provided for attribute '{attribute}'")
        self.attribute = attribute


class NoActivationError(FuzzyLatticeError):
    """Defuzzification was asked for an aggregate with zero area."""


class NoInputsError(FuzzyLatticeError):
    """An inference step was invoked with an empty input set."""


class PhaseOrderError(FuzzyLatticeError):
    """Consultation phases were submitted out of index order."""


class InvalidAxesError(FuzzyLatticeError):
    """Surface-grid axes are unusable (identical, cross-phase, or shadowed)."""


class KBFormatError(FuzzyLatticeError):
    """The knowledge-base document violates the file format.

    `location` pinpoints the offending element, e.g. "rows[3].values.a2".
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class EmptySystemError(KBFormatError):
    """The information system contains no rows."""


class PatientFileError(FuzzyLatticeError):
    """A patient-record document violates its file format."""


class CapacityExceededError(FuzzyLatticeError):
    """Attribute count exceeds the configured lattice materialization cap."""


class InconsistentKnowledgeError(FuzzyLatticeError):
    """Conflicting rows tie on reliability; the knowledge base cannot build.

    `report` carries the ConflictReport gathered before the failure (the
    lenient policy fills it completely, the strict policy stops at the
    first tie).
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
