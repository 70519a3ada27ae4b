"""Exception types shared across the toolkit."""


class AlertScopeError(Exception):
    pass


class MalformedUrl(AlertScopeError, ValueError):
    pass


class UnknownSuffix(AlertScopeError, UserWarning):
    """Raised as a warning when no registry rule matches a name's TLD."""


class MalformedRdata(AlertScopeError, ValueError):
    pass


class UnsupportedAlgorithm(AlertScopeError):
    pass


class ResolverTimeout(AlertScopeError):
    pass


class IncompleteFixture(AlertScopeError):
    """The record source cannot answer for a name it should know about."""


class SchemaError(AlertScopeError, ValueError):
    pass


class FetchFailure(AlertScopeError):
    pass


class TlsTimeout(AlertScopeError):
    pass


class ConfigError(AlertScopeError):
    pass
