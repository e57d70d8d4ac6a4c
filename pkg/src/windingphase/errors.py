"""Exception types shared across the package."""


class WindingPhaseError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(WindingPhaseError, ValueError):
    """Basis sizes of two objects do not match."""


class DomainError(WindingPhaseError, ValueError):
    """A numeric argument is outside its legal domain."""


class ConfigError(WindingPhaseError):
    """An experiment configuration is missing, malformed, or invalid.

    ``key`` names the offending entry (e.g. ``"periods[0]"``) when known.
    """

    def __init__(self, message, key=None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


class ResourceGuardError(WindingPhaseError):
    """A run would generate more events than the configured guard allows."""

    def __init__(self, event_count, limit):
        super().__init__(
            f"run would generate {event_count} events, guard limit is {limit}"
        )
        self.event_count = event_count
        self.limit = limit
