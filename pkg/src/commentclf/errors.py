"""Exception types raised across the package.

Everything derives from :class:`CommentClfError` so callers (notably the
CLI) can distinguish data problems from programming errors with a single
``except`` clause.
"""


class CommentClfError(Exception):
    """Base class for all errors raised by commentclf."""


class MissingColumn(CommentClfError):
    """A column named in the schema mapping is absent from the CSV header."""


class UnparsableLabel(CommentClfError):
    """A label cell is outside the accepted surface strings."""

    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        super().__init__(f"row {row}: unparsable label {value!r}")


class EmptyCorpus(CommentClfError):
    """The CSV contains a header but no data rows."""


class MalformedCsv(CommentClfError):
    """Quoting, row-length, encoding, or field-content violation."""


class UnlabeledCorpus(CommentClfError):
    """An operation that needs labels was given an unlabeled corpus."""


class EmptyVocabulary(CommentClfError):
    """No term survived the document-frequency threshold."""


class SingleClassCorpus(CommentClfError):
    """Training or scoring requires both classes to be present."""


class DimensionMismatch(CommentClfError):
    """Feature matrix width does not match what the model was trained on."""


class ColumnOutOfRange(CommentClfError):
    """A column selection references a column the matrix does not have."""


class FoldInfeasible(CommentClfError):
    """Stratified folding is impossible for the requested fold count."""


class LengthMismatch(CommentClfError):
    """Paired sequences (predictions and gold labels) differ in length."""


class EmptyReport(CommentClfError):
    """Report rendering was asked to format an empty collection."""


class UnknownRun(CommentClfError):
    """A run name is not present in the run registry."""


class SchemaMismatch(CommentClfError):
    """Model expectations (view or feature space) conflict with the corpus."""


class MissingComponent(CommentClfError):
    """A delegated run needs the fine-tuning component, which is not installed."""
