"""Exception types shared across the package."""


class MinimppError(Exception):
    """Base class for all package errors."""


class SchemaError(MinimppError):
    """Unknown table/column or a row that does not match its table schema."""


class EncodingError(MinimppError):
    """Encoding not applicable to the value type, or a corrupt chunk."""


class ClusterUnsafeError(MinimppError):
    """Some bucket has no serving replica; reads and writes are refused."""


class ClusterStateError(MinimppError):
    """Operation not valid for the current node/cluster state."""


class PlanError(MinimppError):
    """Physical plan fails validation (missing column, context mismatch...)."""


class ParamError(MinimppError):
    """Query substitution parameter outside its documented domain."""


class ConfigFrozenError(MinimppError):
    """Configuration mutation attempted while a benchmark run is in progress."""


class BatchIngestError(MinimppError):
    """Corrupt packet archive or unusable manifest."""
