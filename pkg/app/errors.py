"""Exceptions raised by the services and mapped to process exit codes by main.py."""


class ToolError(Exception):
    """Base error; carries the exit code the CLI should terminate with."""

    exit_code = 2

    def __init__(self, detail: str, exit_code: int = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class DomainError(ToolError):
    """Argument outside the domain of an operation (n = 0, arity mismatch, ...)."""


class ParseError(ToolError):
    """Malformed tree string."""

    def __init__(self, detail: str, position: int):
        super().__init__(f"{detail} at position {position}")
        self.position = position


class AddressError(ToolError):
    """Address leaves the tree, or names a node no rotation can use."""


class CompositionError(ToolError):
    """Paths or cells that do not compose."""


class InvariantViolation(ToolError):
    """Internal consistency check failed; never expected in practice."""

    exit_code = 3
