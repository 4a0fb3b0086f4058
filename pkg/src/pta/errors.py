"""Exception taxonomy shared across the engine."""


class PtaError(Exception):
    """Base class for all engine errors."""


# -- goal net loading / interpretation ---------------------------------------

class SchemaError(PtaError):
    """Document is malformed or missing required fields."""


class GraphError(PtaError):
    """Goal net violates a structural invariant (dangling arc, bad weights...)."""


class NotEnabled(PtaError):
    """Transition fired while one of its input states was inactive."""


class UnknownTask(PtaError):
    """Task or predicate name not bound in the registry."""


class GuardUnmatched(PtaError):
    """Conditional transition with no true predicate and no default arc."""


class CycleLimit(PtaError):
    """advance() exceeded its firing budget; the model is livelocked."""


# -- FCM ---------------------------------------------------------------------

class DimensionMismatch(PtaError):
    """State vector size does not match the model's concept count."""


class UnboundEvent(PtaError):
    """Event name has no leaf binding in the persuasion FCM."""


# -- event control -----------------------------------------------------------

class UnknownEventName(PtaError):
    """Event name missing from the scenario catalog for its category."""


# -- knowledge base ----------------------------------------------------------

class UnknownSlot(PtaError):
    """Assignment references a slot the template does not define."""


class UnknownLabel(PtaError):
    """Assignment uses a label outside the template's vocabulary."""


class TemplateMismatch(PtaError):
    """Taught map graded against a template it does not belong to."""


# -- agent -------------------------------------------------------------------

class UnroutedEvent(PtaError):
    """Event name missing from the scenario routing table."""


class EmptyCatalog(PtaError):
    """A needed cue catalog has no entries."""


# -- scenario ----------------------------------------------------------------

class DanglingReference(PtaError):
    """Scenario cross-reference points at a key that does not exist."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- session service ---------------------------------------------------------

class UnknownScenario(PtaError):
    """Requested scenario is not loaded on the server."""


class UnknownSession(PtaError):
    """Session id does not exist."""


class IllegalAction(PtaError):
    """Action is not valid for the session's current view."""


class SessionCompleted(PtaError):
    """Session already reached its terminal status."""
