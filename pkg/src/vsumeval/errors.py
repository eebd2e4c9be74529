"""Exception hierarchy shared by the library and the CLI.

Every error carries the process exit code the CLI maps it to, so a failing
run can be diagnosed from ``$?`` alone.
"""


class EvaluationError(Exception):
    """Base class for all expected failures."""

    exit_code = 1


class ManifestNotFoundError(EvaluationError):
    exit_code = 3


class SchemaViolationError(EvaluationError):
    exit_code = 4


class EmptySummaryDirectoryError(EvaluationError):
    exit_code = 5


class UnsupportedFormatError(EvaluationError):
    exit_code = 6


class CorruptImageError(EvaluationError):
    exit_code = 7


class FeatureError(EvaluationError, ValueError):
    """Invalid input to a feature kernel (empty image, wrong dimensions)."""

    exit_code = 8


class SimilarityInputError(EvaluationError, ValueError):
    """Length mismatch or non-normalized input to the similarity measure."""

    exit_code = 9


class EmptySummaryError(EvaluationError, ValueError):
    exit_code = 10


class CacheError(EvaluationError):
    exit_code = 11


class IOFailureError(EvaluationError):
    exit_code = 12


EXIT_CODES = {
    cls.__name__: cls.exit_code
    for cls in (
        EvaluationError,
        ManifestNotFoundError,
        SchemaViolationError,
        EmptySummaryDirectoryError,
        UnsupportedFormatError,
        CorruptImageError,
        FeatureError,
        SimilarityInputError,
        EmptySummaryError,
        CacheError,
        IOFailureError,
    )
}
