from typing import Optional

import numpy as np

from core.config import settings
from core.errors import InvalidInputError, SingularMatrixError, TruncationRejected
from core.logging_config import get_logger
from schemas.instances import LinearSystemInstance
from schemas.traces import SolveResult
from utils.linalg import condition_number

logger = get_logger(__name__)

NORM_FLOOR = 1e-14
UNIT_TOL = 1e-10


class PostprocessService:
    @staticmethod
    def renormalize(x) -> np.ndarray:
        x = np.asarray(x)
        norm = float(np.linalg.norm(x))
        if norm <= NORM_FLOOR:
            raise InvalidInputError("cannot renormalize a near-zero vector", norm=norm)
        return x / norm

    @staticmethod
    def fidelity(x_r, x_final) -> float:
        """|<x_r|x_final>| for unit vectors, clipped to [0, 1]."""
        x_r = np.asarray(x_r)
        x_final = np.asarray(x_final)
        if x_r.shape != x_final.shape:
            raise InvalidInputError("fidelity needs vectors of equal length", lengths=[x_r.size, x_final.size])
        for name, vector in (("x_r", x_r), ("x_final", x_final)):
            norm = float(np.linalg.norm(vector))
            if abs(norm - 1.0) > UNIT_TOL:
                raise InvalidInputError("fidelity needs unit vectors", vector=name, norm=norm)
        return float(min(1.0, abs(np.vdot(x_r, x_final))))

    @staticmethod
    def reference_solution(instance: LinearSystemInstance) -> np.ndarray:
        """A^-1 b normalized, by dense direct solve."""
        try:
            condition_number(instance.A)
            x = np.linalg.solve(instance.A, instance.b)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError("infinite condition number", dim=instance.dim) from exc
        return PostprocessService.renormalize(x)

    @staticmethod
    def truncate_imaginary(state, epsilon: Optional[float] = None) -> np.ndarray:
        """Drop the second half of a length-2N state when its norm is at most epsilon.

        `state` is the real-coordinate vector (u, v) or the complex (u, i v); epsilon
        defaults to TRUNCATION_FACTOR * ||state||. Returns the kept first half,
        unnormalized. Raises TruncationRejected (the "modify T, dt" signal) otherwise.
        """
        state = np.asarray(state)
        if state.ndim != 1 or state.shape[0] % 2:
            raise InvalidInputError("state length must be even", length=state.size)
        half = state.shape[0] // 2
        if epsilon is None:
            epsilon = settings.TRUNCATION_FACTOR * float(np.linalg.norm(state))

        residual = float(np.linalg.norm(state[half:]))
        if residual > epsilon:
            raise TruncationRejected(
                "imaginary residual above truncation threshold; modify T, dt",
                residual=residual, epsilon=epsilon,
            )

        kept = state[:half]
        return kept.real if np.iscomplexobj(kept) else kept.copy()

    @staticmethod
    def finalize(state, instance: LinearSystemInstance, steps: Optional[int] = None) -> SolveResult:
        """Truncate, renormalize and score a final real-coordinate state.

        Fidelity before truncation compares the whole state with x_r embedded as
        (x_r, 0). A rejected truncation is reported in the result, not raised.
        """
        state = PostprocessService.renormalize(np.asarray(state, dtype=float))
        half = state.shape[0] // 2
        reference = PostprocessService.reference_solution(instance)
        embedded = np.concatenate([reference, np.zeros(half)])
        before = PostprocessService.fidelity(embedded, state)
        residual = float(np.linalg.norm(state[half:]))

        try:
            kept = PostprocessService.truncate_imaginary(state)
        except TruncationRejected:
            suggested = 2 * steps if steps else None
            logger.warning(
                "Truncation rejected",
                extra={"dim": instance.dim, "residual": residual, "suggested_steps": suggested},
            )
            return SolveResult(
                fidelity_before_truncation=before,
                imag_residual=residual,
                truncation_accepted=False,
                suggested_steps=suggested,
            )

        solution = PostprocessService.renormalize(kept)
        return SolveResult(
            solution=solution,
            fidelity=PostprocessService.fidelity(reference, solution),
            fidelity_before_truncation=before,
            imag_residual=residual,
            truncation_accepted=True,
        )
