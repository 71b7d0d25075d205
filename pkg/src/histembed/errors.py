"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class HistEmbedError(Exception):
    exit_code = 1


class ImageFileNotFound(HistEmbedError):
    exit_code = 3


class UnsupportedFormat(HistEmbedError):
    exit_code = 4


class CorruptImageData(HistEmbedError):
    exit_code = 5


class InvalidParameter(HistEmbedError, ValueError):
    exit_code = 6


class DimensionMismatch(HistEmbedError, ValueError):
    exit_code = 7


class ImageWriteFailure(HistEmbedError):
    exit_code = 8


class NormViolation(HistEmbedError, ValueError):
    exit_code = 9


EXIT_CODES = {
    cls.__name__: cls.exit_code
    for cls in (
        ImageFileNotFound,
        UnsupportedFormat,
        CorruptImageData,
        InvalidParameter,
        DimensionMismatch,
        ImageWriteFailure,
        NormViolation,
    )
}
