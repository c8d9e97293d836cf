"""Exception types shared across the package."""


class BqsmError(Exception):
    """Base class for all package errors."""


class InputError(BqsmError, ValueError):
    """Malformed arguments: length mismatches, out-of-range parameters."""


class MemoryBoundViolation(BqsmError):
    """A strategy tried to carry more than ``q`` qubits past the memory bound."""


class DecodeFailure(BqsmError):
    """No codeword within the correction radius matches the syndrome."""


class ConfigError(BqsmError, ValueError):
    """Invalid experiment configuration or infeasible parameter choice."""
