"""
Исключения пакета. Ошибки входных данных наследуют ValueError,
численные отказы - ArithmeticError/RuntimeError.
"""

from typing import List, Sequence


class PolicyCompressionError(Exception):
    """Базовое исключение пакета"""


class InvalidModelError(PolicyCompressionError, ValueError):
    """CMP или политика не прошли валидацию"""

    def __init__(self, violations: Sequence[str]):
        self.violations: List[str] = list(violations)
        super().__init__("invalid model: " + "; ".join(self.violations))


class DimensionMismatchError(PolicyCompressionError, ValueError):
    pass


class SingularSystemError(PolicyCompressionError, ArithmeticError):
    pass


class SpectralGapError(PolicyCompressionError, ArithmeticError):
    """Собственные значения не найдены; residual - невязка проверки"""

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(f"{message} (residual={residual:.3e})")


class NoMixingError(PolicyCompressionError, ValueError):
    pass


class NonErgodicChainError(PolicyCompressionError, ValueError):
    pass


class SupportViolationError(PolicyCompressionError, ValueError):
    def __init__(self, offending_indices: Sequence[int], message: str = "support violation"):
        self.offending_indices: List[int] = [int(i) for i in offending_indices]
        super().__init__(f"{message}: indices {self.offending_indices}")


class InfeasibleBranchError(PolicyCompressionError, ValueError):
    pass


class OracleError(PolicyCompressionError, RuntimeError):
    pass


class CoverError(PolicyCompressionError, RuntimeError):
    def __init__(self, candidate: int, value: float):
        self.candidate = candidate
        self.value = value
        super().__init__(f"candidate {candidate} cannot be covered (divergence {value})")


class PlannerInputError(PolicyCompressionError, ValueError):
    pass
