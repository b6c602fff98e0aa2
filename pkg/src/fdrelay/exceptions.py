class UnboundedPowerError(ValueError):
    """The energy loop is not contractive, so relay power has no finite optimum."""


class DegenerateChannelError(ValueError):
    """A channel that must be nonzero is zero."""
