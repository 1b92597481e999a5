class MomentCSError(Exception):
    """Base class for package errors."""


class InvalidArgument(MomentCSError, ValueError):
    pass


class ImageFormatError(MomentCSError):
    """Raised for unreadable image files.

    ``offset`` is the byte position in the file where parsing failed, when known.
    """

    def __init__(self, message, path=None, offset=None):
        self.path = path
        self.offset = offset
        where = ""
        if path is not None:
            where = f"{path}: "
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(where + message)


class MalformedHeader(ImageFormatError):
    pass


class UnsupportedDepth(ImageFormatError):
    pass


class TruncatedData(ImageFormatError):
    pass
