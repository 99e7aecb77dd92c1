"""Exception hierarchy. Every error raised on bad input derives from
:class:`ThresholdLabError` so the CLI can map it to a nonzero exit code."""


class ThresholdLabError(ValueError):
    pass


class EmptyGeneratorError(ThresholdLabError):
    pass


class NotSubfamilyError(ThresholdLabError):
    pass


class GroundMismatchError(ThresholdLabError):
    pass


class EnumerationCapError(ThresholdLabError):
    pass


class TrivialFamilyError(ThresholdLabError):
    pass


class NullEventError(ThresholdLabError):
    pass


class EndpointError(ThresholdLabError):
    pass


class CoverCapError(ThresholdLabError):
    pass


class HypothesisNotMetError(ThresholdLabError):
    pass


class PosetError(ThresholdLabError):
    pass


class AntisymmetryError(PosetError):
    pass


class NotUpperSetError(ThresholdLabError):
    pass


class EmbeddingError(PosetError):
    pass


class AcceptanceStarvationError(ThresholdLabError):
    pass
