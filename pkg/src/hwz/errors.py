"""Exception hierarchy shared by every hwz module."""


class HwzError(Exception):
    """Base class for all errors raised by hwz."""


# transform
class InvalidLength(HwzError, ValueError):
    pass


class InvalidShape(HwzError, ValueError):
    pass


class LevelTooDeep(HwzError, ValueError):
    pass


# thresholding
class InvalidThreshold(HwzError, ValueError):
    pass


class InsufficientCoefficients(HwzError, ValueError):
    pass


# metrics
class ShapeMismatch(HwzError, ValueError):
    pass


class DegenerateReference(HwzError, ValueError):
    pass


# rate control
class InvalidTarget(HwzError, ValueError):
    pass


# codec / file formats
class FormatError(HwzError):
    """Raised for anything wrong with bytes read from disk."""


class BadMagic(FormatError):
    pass


class UnsupportedVersion(FormatError):
    pass


class TruncatedPayload(FormatError):
    pass


class MalformedSparse(FormatError):
    pass


class MalformedHeader(FormatError):
    pass


class HeaderMismatch(HwzError, ValueError):
    pass


class BadFormat(FormatError):
    pass


class UnsupportedMaxval(FormatError):
    pass


class TruncatedFile(FormatError):
    pass


class IoFailure(HwzError, OSError):
    pass
