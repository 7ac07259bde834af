from typing import Optional


class SambleError(ValueError):
    """Base class for every error raised by the sampling pipeline."""


class ParseError(SambleError):
    def __init__(self, path: str, line: int, reason: str):
        super().__init__("%s:%d: %s" % (path, line, reason))
        self.path = path
        self.line = line
        self.reason = reason


class EmptyCloudError(SambleError):
    def __init__(self, source: str = ""):
        super().__init__("point cloud is empty" + (" (%s)" % source if source else ""))
        self.source = source


class InvalidKError(SambleError):
    def __init__(self, k: int, n: int):
        super().__init__("k must be in [1, %d], got %d" % (n, k))
        self.k = k
        self.n = n


class InvalidMError(SambleError):
    def __init__(self, m: int, n: int):
        super().__init__("M must be in [1, %d], got %d" % (n, m))
        self.m = m
        self.n = n


class InvalidCellError(SambleError):
    def __init__(self, cell: float):
        super().__init__("voxel cell edge must be > 0, got %r" % cell)
        self.cell = cell


class FormatError(SambleError):
    pass


class DimMismatchError(SambleError):
    def __init__(self, expected: int, actual: int, what: str = "input width"):
        super().__init__("%s mismatch: expected %d, got %d" % (what, expected, actual))
        self.expected = expected
        self.actual = actual


class ShapeMismatchError(SambleError):
    pass


class IncompatibleModeError(SambleError):
    def __init__(self, mode: str, target: str):
        super().__init__("indexing mode %s cannot be applied to %s" % (mode, target))
        self.mode = mode
        self.target = target


class TooFewPointsError(SambleError):
    def __init__(self, needed: int, actual: int):
        super().__init__("need at least %d points, got %d" % (needed, actual))
        self.needed = needed
        self.actual = actual


class LengthMismatchError(SambleError):
    pass


class InfeasibleError(SambleError):
    def __init__(self, m: int, available: int):
        super().__init__("cannot sample %d points from %d available" % (m, available))
        self.m = m
        self.available = available


class InvalidTauError(SambleError):
    def __init__(self, tau: float):
        super().__init__("temperature must be > 0, got %r" % tau)
        self.tau = tau


class MissingMaskError(SambleError):
    def __init__(self, shape_id: Optional[str] = None):
        super().__init__("shape %s has no ground-truth edge mask" % (shape_id or "<unnamed>"))
        self.shape_id = shape_id


class UnknownGeneratorError(SambleError):
    def __init__(self, generator: str):
        super().__init__("unknown shape generator: %s" % generator)
        self.generator = generator


class ConfigError(SambleError):
    pass
