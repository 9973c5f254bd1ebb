# core/exceptions.py
"""
Error types shared by every layer of the simulator.

Calculation code raises these; the management commands translate them into
exit codes (see simulations/management/commands/_base.py).
"""


class BellSimError(Exception):
    """Base class for simulator failures."""


# ==========================================================
# NUMERICAL FAILURES (exit code 3)
# ==========================================================

class NumericalError(BellSimError, ArithmeticError):
    """A computation produced or would produce a non-finite result."""


class DomainError(NumericalError, ValueError):
    """Argument outside the domain of a special function."""


class SpecialFunctionOverflow(NumericalError, OverflowError):
    """Argument beyond the representable range of exp(x)."""


class FactorizationError(NumericalError):
    """Covariance matrix is indefinite beyond the clamp tolerance."""


class TransmittanceEvaluationError(NumericalError):
    """Non-finite intermediate while evaluating a beam transmittance."""


class UndefinedCorrelationError(NumericalError, ZeroDivisionError):
    """Correlation coefficient requested with P_same + P_different = 0."""


class FeasibilityError(BellSimError):
    """Postselection acceptance probability is too small to sample."""


class CutoffTooSmallError(BellSimError):
    """Fock-space truncation discards more probability than allowed."""


# ==========================================================
# CONFIGURATION (exit code 1)
# ==========================================================

class ConfigError(BellSimError, ValueError):
    """
    Invalid run configuration.

    Carries the offending line number and ``section.key`` when known so the
    CLI can point at the exact place in the file.
    """

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        location = []
        if line is not None:
            location.append(f"line {line}")
        if key is not None:
            location.append(key)
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")
