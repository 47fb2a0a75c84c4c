"""
Dense linear-algebra primitives shared by every service.

All functions are pure: they never modify their inputs. Matrices are numpy arrays,
real or complex; real inputs stay real wherever the result is real.
"""
import numpy as np

from core.errors import InvalidInputError, NotHermitianError, SingularMatrixError

HERMITIAN_TOL = 1e-12


def as_square_matrix(M, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"{name} must be square", shape=list(M.shape))
    if not np.all(np.isfinite(M)):
        raise InvalidInputError(f"{name} must contain finite entries only")
    return M


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return M as an array, rejecting it when max |M - M^dagger| exceeds tol.

    The error names the worst entry pair so a caller can see which block broke.
    """
    M = as_square_matrix(M)
    deviation = np.abs(M - M.conj().T)
    row, col = np.unravel_index(np.argmax(deviation), deviation.shape)
    worst = float(deviation[row, col])
    if worst > tol:
        raise NotHermitianError(
            "matrix is not Hermitian",
            row=int(row), col=int(col), deviation=worst,
        )
    return M


def hermitian_eig(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    M = check_hermitian(M)
    eigenvalues, eigenvectors = np.linalg.eigh(M)
    return eigenvalues, eigenvectors


def singular_values(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2:
        raise InvalidInputError("matrix must be two-dimensional", shape=list(M.shape))
    return np.linalg.svd(M, compute_uv=False)


def spectral_norm(M) -> float:
    sigma = singular_values(M)
    if sigma.size == 0 or sigma[0] == 0.0:
        raise InvalidInputError("spectral norm of a zero matrix is not meaningful here")
    return float(sigma[0])


def condition_number(M) -> float:
    """sigma_max / sigma_min; raises SingularMatrixError when sigma_min is numerically zero."""
    M = as_square_matrix(M)
    sigma = singular_values(M)
    if sigma[0] == 0.0:
        raise InvalidInputError("condition number of a zero matrix is undefined")
    if sigma[-1] <= sigma[0] * np.finfo(float).eps * M.shape[0]:
        raise SingularMatrixError(
            "infinite condition number",
            sigma_max=float(sigma[0]), sigma_min=float(sigma[-1]),
        )
    return float(sigma[0] / sigma[-1])


def matrix_exp_hermitian(H, t: float) -> np.ndarray:
    """exp(-i H t) = V diag(exp(-i lambda t)) V^dagger."""
    eigenvalues, eigenvectors = hermitian_eig(H)
    phases = np.exp(-1j * eigenvalues * t)
    return (eigenvectors * phases) @ eigenvectors.conj().T


def unitarity_error(U) -> float:
    """max |U^dagger U - I| entry."""
    U = np.asarray(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
