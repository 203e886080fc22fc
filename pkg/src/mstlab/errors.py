"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """Requested structure exceeds the configured vertex/edge capacity."""


class EdgeListFormatError(ValueError):
    """Malformed edge-list file; message carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class DisconnectedError(ValueError):
    """Endpoints lie in different components, or a spanning tree was required."""


class ContractError(ValueError):
    """Input violates a structural precondition (bad partial forest, bad window)."""
