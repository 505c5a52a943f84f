class FinetuneError(Exception):
    """Base class for errors raised by this component."""


class MissingColumn(FinetuneError):
    """A required column is absent from the CSV header."""


class UnparsableLabel(FinetuneError):
    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        super().__init__(f"row {row}: unparsable label {value!r}")


class EmptyCorpus(FinetuneError):
    """The CSV contains a header but no data rows."""


class MalformedCsv(FinetuneError):
    """Quoting, row-length, encoding, or field-content violation."""


class SchemaMismatch(FinetuneError):
    """The corpus lacks columns the checkpoint was trained to consume."""


class ModelUnavailable(FinetuneError):
    """Pretrained weights could not be loaded (offline or unknown id)."""


class OutOfMemory(FinetuneError):
    """Training ran out of memory; retry with a smaller --batch-size."""
