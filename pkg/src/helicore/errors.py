"""Exception types shared across the package."""


class DomainError(ValueError):
    """A field lies outside the mathematical domain of the requested operator.

    Raised e.g. when an inverse-curl is asked of a field with a mean mode or
    measurable divergence, or when an eigenfield precondition fails.
    """


class SnapshotFormatError(ValueError):
    """A snapshot file fails validation (magic, version, layout, or size)."""


class ConfigError(ValueError):
    """A run configuration (JSON document or CLI field spec) is invalid."""


class BlowUpError(RuntimeError):
    """Time integration produced non-finite values (blow-up or dt too large).

    Carries the failing ``step`` and the ``diagnostics`` recorded so far.
    """

    def __init__(self, message, step=None, diagnostics=None):
        super().__init__(message)
        self.step = step
        self.diagnostics = diagnostics
