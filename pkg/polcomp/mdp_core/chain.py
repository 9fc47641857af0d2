import numpy as np
import scipy.linalg
from loguru import logger

from polcomp.common.config import config
from polcomp.common.errors import DimensionMismatchError, InvalidModelError, SpectralGapError
from .models import Cmp, TabularPolicy, PolicyInducedChain, SpectralInfo


def induced_chain(c: Cmp, p: TabularPolicy) -> PolicyInducedChain:
    """Цепь на состояниях, индуцированная политикой: M = sum_a pi(a|s) P(.|s,a)"""
    if p.pi.shape != (c.num_states, c.num_actions):
        raise DimensionMismatchError(
            f"policy shape {p.pi.shape} does not match ({c.num_states}, {c.num_actions})"
        )
    matrix = np.einsum("sa,sat->st", p.pi, c.transition)
    return PolicyInducedChain(matrix=matrix)


def stationary_distribution(m: PolicyInducedChain) -> np.ndarray:
    """
    Решение pi^T M = pi^T, sum(pi) = 1 методом наименьших квадратов.
    Для приводимых цепей возвращается решение минимальной нормы.
    """
    n = m.matrix.shape[0]
    system = np.vstack((m.matrix.T - np.eye(n), np.ones((1, n))))
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    solution = np.maximum(solution, 0.0)
    return solution / solution.sum()


def _check_stochastic(matrix: np.ndarray):
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"chain matrix must be square, got {matrix.shape}")
    if np.any(matrix < 0) or not np.allclose(matrix.sum(axis=1), 1.0, atol=1e-9, rtol=0.0):
        raise InvalidModelError(["chain matrix is not row-stochastic"])


def spectral_gap(m: PolicyInducedChain) -> SpectralInfo:
    """
    Спектральный зазор gamma0 = min{1 - lambda2, 1}.

    Для обратимой цепи собственные значения считаются через симметризацию
    D^{1/2} M D^{-1/2} и вещественны. Иначе lambda2 - вторая по величине
    вещественная часть, и reversible=False.
    """
    matrix = m.matrix
    _check_stochastic(matrix)
    n = matrix.shape[0]
    tol = config.spectral_config

    stationary = stationary_distribution(m)
    flow = stationary[:, None] * matrix
    reversible = bool(np.max(np.abs(flow - flow.T)) <= tol["reversibility_tolerance"])

    try:
        if reversible and np.all(stationary > 0):
            root = np.sqrt(stationary)
            symmetric = root[:, None] * matrix / root[None, :]
            eigenvalues = scipy.linalg.eigvalsh((symmetric + symmetric.T) / 2.0)[::-1]
            max_imag = 0.0
            moduli = np.abs(eigenvalues)
        else:
            complex_eigenvalues = np.linalg.eigvals(matrix)
            order = np.argsort(-complex_eigenvalues.real, kind="stable")
            complex_eigenvalues = complex_eigenvalues[order]
            eigenvalues = complex_eigenvalues.real
            moduli = np.abs(complex_eigenvalues)
            max_imag = float(np.max(np.abs(complex_eigenvalues.imag)))
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise SpectralGapError(f"eigenvalue computation failed: {e}") from e

    residual = abs(float(eigenvalues[0]) - 1.0)
    if residual > tol["top_eigenvalue_tolerance"]:
        raise SpectralGapError("leading eigenvalue of a stochastic matrix is not 1", residual)

    # Одно состояние: цепь перемешивается за один шаг
    if n == 1:
        lambda2, modulus = 0.0, 0.0
    else:
        lambda2, modulus = float(eigenvalues[1]), float(moduli[1])

    gamma0 = float(np.clip(min(1.0 - lambda2, 1.0), 0.0, 1.0))
    if not reversible:
        logger.debug(f"Non-reversible chain of {n} states: lambda2 taken by real part")

    return SpectralInfo(
        lambda2=lambda2,
        lambda2_modulus=modulus,
        gamma0=gamma0,
        reversible=reversible,
        eigenvalues=[float(v) for v in eigenvalues],
        max_imag=max_imag,
        stationary=[float(v) for v in stationary],
    )
