class ModuleFramesError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatch(ModuleFramesError):
    pass


class FieldMismatch(ModuleFramesError):
    """Two scalars carry different square-root adjunctions."""


class NotOnTorus(ModuleFramesError):
    pass


class WrongDimension(ModuleFramesError):
    pass


class NotUnimodular(ModuleFramesError):
    pass


class UnsupportedSymmetry(ModuleFramesError):
    pass


class BadDilation(ModuleFramesError):
    pass


class BadDeterminant(ModuleFramesError):
    pass


class BadCoset(ModuleFramesError):
    pass


class NotDualFrames(ModuleFramesError):
    pass


class NotBiorthogonal(ModuleFramesError):
    pass


class NotRefinable(ModuleFramesError):
    pass


class ZeroVector(ModuleFramesError):
    pass


class GramianSingular(ModuleFramesError):
    pass


class IncompatibleCenter(ModuleFramesError):
    pass


class ParsevalCounterexample(ModuleFramesError):
    """An exactly idempotent compactly supported Gramian different from 1."""


class ParseError(ModuleFramesError):
    pass


class UsageError(ModuleFramesError):
    pass
