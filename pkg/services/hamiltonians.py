import csv
from pathlib import Path

import numpy as np

from core.errors import InvalidInputError, ScheduleGuardError
from core.logging_config import get_logger
from schemas.hamiltonians import GapPoint, HamiltonianPair, Schedule
from schemas.instances import LinearSystemInstance
from utils.linalg import hermitian_eig

logger = get_logger(__name__)

# first-order validity guard: dt * max_s ||H(s)|| must stay below this
GUARD_LIMIT = 0.5
# gaps below this are reported but not scored
DEGENERATE_GAP = 1e-12


class HamiltonianService:
    @staticmethod
    def projector_qb(b) -> np.ndarray:
        """Q_b = I - |b><b|."""
        b = np.asarray(b, dtype=float)
        if b.ndim != 1:
            raise InvalidInputError("b must be a vector", shape=list(b.shape))
        norm = float(np.linalg.norm(b))
        if abs(norm - 1.0) > 1e-10:
            raise InvalidInputError("b must have unit norm", norm=norm)
        return np.eye(b.size) - np.outer(b, b)

    @staticmethod
    def build_h0(b) -> np.ndarray:
        Q = HamiltonianService.projector_qb(b)
        zero = np.zeros_like(Q)
        return np.block([[zero, Q], [Q, zero]])

    @staticmethod
    def build_h1(A, b) -> np.ndarray:
        Q = HamiltonianService.projector_qb(b)
        A = np.asarray(A, dtype=float)
        if A.shape != Q.shape:
            raise InvalidInputError("A and b dimensions differ", a_shape=list(A.shape), b_length=Q.shape[0])
        zero = np.zeros_like(Q)
        return np.block([[zero, A @ Q], [Q @ A, zero]])

    @staticmethod
    def build_pair(instance: LinearSystemInstance) -> HamiltonianPair:
        return HamiltonianPair(
            N=instance.dim,
            H0=HamiltonianService.build_h0(instance.b),
            H1=HamiltonianService.build_h1(instance.A, instance.b),
            A=instance.A,
            b=instance.b,
        )

    @staticmethod
    def interpolate(pair: HamiltonianPair, s: float) -> np.ndarray:
        """H(s) = (1 - f(s)) H0 + f(s) H1 with the linear schedule f(s) = s."""
        if not 0.0 <= s <= 1.0:
            raise InvalidInputError("s must lie in [0, 1]", s=s)
        return (1.0 - s) * pair.H0 + s * pair.H1

    @staticmethod
    def gap_scan(pair: HamiltonianPair, grid_points: int, zero_tol: float = 1e-9) -> list[GapPoint]:
        """Gap to the zero eigenspace and the adiabatic criterion on a uniform s grid.

        The tracked null vector starts at (b, 0) and is carried to each grid point by
        projecting the previous one onto the new zero eigenspace (maximal overlap).
        """
        if grid_points < 2:
            raise InvalidInputError("gap scan needs at least two grid points", grid_points=grid_points)

        dH = pair.H1 - pair.H0
        tracked = pair.initial_state
        points = []

        for s in np.linspace(0.0, 1.0, grid_points):
            H = HamiltonianService.interpolate(pair, float(s))
            eigenvalues, eigenvectors = hermitian_eig(H)
            magnitudes = np.abs(eigenvalues)

            kernel = eigenvectors[:, magnitudes <= zero_tol]
            if kernel.shape[1] > 0:
                projected = kernel @ (kernel.conj().T @ tracked)
                norm = np.linalg.norm(projected)
                if norm > zero_tol:
                    tracked = projected / norm

            nonzero = magnitudes > zero_tol
            if not np.any(nonzero):
                points.append(GapPoint(s=float(s), gap=0.0, flagged=True))
                continue

            gap = float(np.min(magnitudes[nonzero]))
            if gap < DEGENERATE_GAP:
                points.append(GapPoint(s=float(s), gap=gap, flagged=True))
                continue

            # both +gap and -gap eigenvectors (and any degenerate partners) are nearest
            nearest = eigenvectors[:, nonzero & (np.abs(magnitudes - gap) <= zero_tol)]
            couplings = np.abs(nearest.conj().T @ (dH @ tracked))
            criterion = float(np.max(couplings)) / gap**2
            points.append(GapPoint(s=float(s), gap=gap, criterion=criterion))

        flagged = sum(point.flagged for point in points)
        if flagged:
            logger.warning("Degenerate gap points in scan", extra={"flagged": flagged, "grid_points": grid_points})
        return points

    @staticmethod
    def validate_schedule(pair: HamiltonianPair, schedule: Schedule) -> float:
        """Check dt * max_s ||H(s)||_2 <= 0.5 and return that product.

        ||H(s)|| is convex in s, so the maximum over [0, 1] sits at an endpoint.
        """
        peak = max(np.linalg.norm(pair.H0, 2), np.linalg.norm(pair.H1, 2))
        product = float(schedule.dt * peak)
        if product > GUARD_LIMIT:
            raise ScheduleGuardError(
                "dt too large for first-order steps",
                dt=schedule.dt, max_norm=float(peak), product=product, limit=GUARD_LIMIT,
            )
        return product

    @staticmethod
    def stepwise_validity(pair: HamiltonianPair, schedule: Schedule) -> float:
        """max_k ||H_k - H_{k-1}|| * dt for the linear schedule."""
        return float(np.linalg.norm(pair.H1 - pair.H0, 2) * schedule.dt / schedule.steps)

    @staticmethod
    def write_gap_csv(points: list[GapPoint], path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["s", "gap", "criterion"])
            for point in points:
                criterion = "" if point.criterion is None else format(point.criterion, ".17g")
                writer.writerow([format(point.s, ".17g"), format(point.gap, ".17g"), criterion])
        return path
