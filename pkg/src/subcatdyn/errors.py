"""Exception hierarchy for the whole package.

Grouped by the module that usually raises them; everything inherits from
SubcatdynError so callers can catch broadly.
"""


class SubcatdynError(Exception):
    pass


class ValidationError(SubcatdynError):
    """A raw description failed structural validation."""


# -- category -----------------------------------------------------------

class MissingIdentity(ValidationError):
    pass


class MissingComposite(ValidationError):
    """The composition table lacks an entry for a composable pair."""


class NonComposablePairInTable(ValidationError):
    pass


class IdentityLawViolation(ValidationError):
    pass


class AssociativityViolation(ValidationError):
    pass


class DanglingEndpoint(ValidationError):
    pass


class EndpointMismatch(ValidationError):
    pass


class IdentityNotPreserved(ValidationError):
    pass


class CompositionNotPreserved(ValidationError):
    pass


# -- dynamics -----------------------------------------------------------

class MotorMismatch(SubcatdynError):
    pass


class NotSubcategorical(SubcatdynError):
    """An operation whose precondition is sub-categoricity got a dynamics
    that fails it."""


class EmptyList(SubcatdynError):
    pass


# -- temporal -----------------------------------------------------------

class SizeGuardExceeded(SubcatdynError):
    pass


class SuccessionViolation(SubcatdynError):
    pass


class ClockNotDeterministic(ValidationError):
    pass


class UnknownState(SubcatdynError):
    pass


# -- open ---------------------------------------------------------------

class SliceNotSubcategorical(ValidationError):
    pass


class DatationViolation(ValidationError):
    pass


class NotAnEquivalence(ValidationError):
    pass


# -- family -------------------------------------------------------------

class EmptyInteraction(ValidationError):
    pass


class CoherenceViolation(ValidationError):
    pass


class UnknownRealizationReference(ValidationError):
    pass


class SynchronizationNotDeterministic(ValidationError):
    pass


class SynchronizationNotCommuting(ValidationError):
    pass


class IndexMismatch(ValidationError):
    pass


# -- generation ---------------------------------------------------------

class PartitionMismatch(ValidationError):
    pass


class InternalCheckFailed(SubcatdynError):
    """A property the library itself guarantees was found violated; this
    signals a bug in the implementation, never bad input."""


class InternalStabilityCheckFailed(InternalCheckFailed):
    pass


# -- cli ----------------------------------------------------------------

class ParseError(SubcatdynError):
    pass


class UnknownReference(SubcatdynError):
    pass


class UnknownCommand(SubcatdynError):
    pass


class LoadError(SubcatdynError):
    """Aggregate of per-document failures collected during a load."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("\n".join(str(f) for f in self.failures))


class UnknownParameterTuple(Warning):
    """Queried rb(R)^-1 with a parameter tuple outside the image."""
