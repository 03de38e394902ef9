"""Exception types shared across the engine.

The CLI maps these onto exit codes: ValidationError and subclasses are
invalid input (2), Unstable/SpanDeficiency are computational instability (3),
VerificationFailure and subclasses are failed cross-checks (4).
"""


class EngineError(Exception):
    """Base class for all engine errors."""


class ValidationError(EngineError):
    """Invalid user input (bad word, bad coordinates, bad file)."""


class NotNef(ValidationError):
    """A nef divisor class was required."""


class NotInterior(ValidationError):
    """The target weight is not interior to the weight polytope."""


class NonIntegralAll(ValidationError):
    """No level k <= K makes the scaled target weight integral."""


class VerificationFailure(EngineError):
    """A derived quantity failed its defining cross-check."""


class NoMatch(VerificationFailure):
    """No divisor class reproduces the requested character."""


class Ambiguous(VerificationFailure):
    """Several divisor classes reproduce the requested character."""


class SpanDeficiency(EngineError):
    """Products of slot sections failed to span the section space."""


class BoxTooSmall(EngineError):
    """Internal signal: the gluing degree box must be enlarged."""


class Unstable(EngineError):
    """A computation did not stabilize within its configured caps."""


class ChamberResolutionFailure(Unstable):
    """Fixed-part peeling could not resolve the chamber structure."""


class NotAffine(EngineError):
    """The weight data of a graded semigroup is not an affine image."""


class NotPointed(EngineError):
    """A pointed cone was required but the generators span a line."""
