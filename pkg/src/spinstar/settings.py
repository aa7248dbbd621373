"""Library-wide numerical tolerances and size limits.

Every value here can be overridden at runtime, either by assigning to the
module attribute or (for the qubit cap) through ``SPINSTAR_MAX_QUBITS``.
"""
import os

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10
PSD_TOL = 1e-12
MAX_KRON_ENTRIES = 2**24
DEFAULT_MAX_QUBITS = 14

# W-state detection
EXACT_W_TOL = 1e-9
PSEUDO_W_TOL = 0.05


class SpinStarError(Exception):
    """Base class for library errors."""


class SizeError(SpinStarError):
    pass


class ContractError(SpinStarError, ValueError):
    """An input violates a documented precondition."""


class NumericalError(SpinStarError, ArithmeticError):
    pass


def max_qubits() -> int:
    raw = os.environ.get("SPINSTAR_MAX_QUBITS")
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError:
        raise ContractError(f"SPINSTAR_MAX_QUBITS must be an integer, got {raw!r}")
    if value < 2:
        raise ContractError("SPINSTAR_MAX_QUBITS must be at least 2")
    return value
