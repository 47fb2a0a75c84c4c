import csv
from pathlib import Path

import numpy as np

from core.errors import FormViolationError, InvalidInputError, ScheduleGuardError
from core.logging_config import get_logger
from models.enums import EvolutionMode
from schemas.evolution import EvolvedState, ReferenceTrace
from schemas.hamiltonians import Schedule
from schemas.instances import LinearSystemInstance
from services.hamiltonians import GUARD_LIMIT, HamiltonianService
from utils.linalg import check_hermitian, matrix_exp_hermitian

logger = get_logger(__name__)

FORM_TOL = 1e-8


class EvolutionService:
    @staticmethod
    def initial_state(instance: LinearSystemInstance) -> EvolvedState:
        amplitudes = np.concatenate([instance.b, np.zeros(instance.dim)]).astype(complex)
        return EvolvedState(amplitudes=amplitudes, step=0, norm=1.0)

    @staticmethod
    def _check_dimensions(state: EvolvedState, H: np.ndarray):
        H = np.asarray(H)
        size = state.amplitudes.shape[0]
        if H.shape != (size, size):
            raise InvalidInputError(
                "Hamiltonian and state dimensions differ",
                state_length=size, hamiltonian_shape=list(H.shape),
            )
        return H

    @staticmethod
    def first_order_step(state: EvolvedState, H, dt: float) -> EvolvedState:
        """(I - i H dt) state, unnormalized."""
        H = EvolutionService._check_dimensions(state, H)
        product = dt * np.linalg.norm(H, 2)
        if product > GUARD_LIMIT:
            raise ScheduleGuardError("dt too large for first-order steps", dt=dt, product=float(product))

        amplitudes = state.amplitudes - 1j * dt * (H @ state.amplitudes)
        return EvolvedState(amplitudes=amplitudes, step=state.step + 1, norm=float(np.linalg.norm(amplitudes)))

    @staticmethod
    def exact_step(state: EvolvedState, H, dt: float) -> EvolvedState:
        """exp(-i H dt) state."""
        H = check_hermitian(EvolutionService._check_dimensions(state, H))
        amplitudes = matrix_exp_hermitian(H, dt) @ state.amplitudes
        return EvolvedState(amplitudes=amplitudes, step=state.step + 1, norm=float(np.linalg.norm(amplitudes)))

    @staticmethod
    def evolve_product(
        instance: LinearSystemInstance,
        schedule: Schedule,
        mode: EvolutionMode = EvolutionMode.FIRST_ORDER,
    ) -> ReferenceTrace:
        """Apply steps k = 1..L with H_k = H(k / L).

        First-order mode renormalizes after every step; `norm` on each state keeps the
        pre-renormalization value. Exact mode is unitary and never renormalizes.
        """
        pair = HamiltonianService.build_pair(instance)
        HamiltonianService.validate_schedule(pair, schedule)

        state = EvolutionService.initial_state(instance)
        states = [state]
        for k in range(1, schedule.steps + 1):
            H = HamiltonianService.interpolate(pair, schedule.s_at(k))
            if mode == EvolutionMode.EXACT:
                state = EvolutionService.exact_step(state, H, schedule.dt)
            else:
                stepped = EvolutionService.first_order_step(state, H, schedule.dt)
                state = EvolvedState(
                    amplitudes=stepped.amplitudes / stepped.norm,
                    step=stepped.step,
                    norm=stepped.norm,
                )
            states.append(state)

        logger.debug(
            "Reference evolution finished",
            extra={"dim": instance.dim, "steps": schedule.steps, "mode": mode.value},
        )
        return ReferenceTrace(mode=mode, steps=schedule.steps, dt=schedule.dt, states=states)

    @staticmethod
    def form_violation(amplitudes: np.ndarray) -> float:
        """Largest Im of the first half or Re of the second half."""
        half = amplitudes.shape[0] // 2
        first = np.abs(amplitudes[:half].imag)
        second = np.abs(amplitudes[half:].real)
        return float(max(first.max(initial=0.0), second.max(initial=0.0)))

    @staticmethod
    def real_coordinates(state: EvolvedState, tol: float = FORM_TOL) -> tuple[np.ndarray, np.ndarray]:
        """(u, v) with state = (u, i v)."""
        amplitudes = state.amplitudes
        if amplitudes.shape[0] % 2:
            raise InvalidInputError("state length must be even", length=amplitudes.shape[0])
        violation = EvolutionService.form_violation(amplitudes)
        if violation > tol:
            raise FormViolationError("state is not in real/imaginary split form", max_violation=violation, step=state.step)

        half = state.half
        return amplitudes[:half].real.copy(), amplitudes[half:].imag.copy()

    @staticmethod
    def inverse_real_coordinates(u, v, step: int = 0) -> EvolvedState:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if u.shape != v.shape or u.ndim != 1:
            raise InvalidInputError("u and v must be vectors of equal length", u_shape=list(u.shape), v_shape=list(v.shape))
        amplitudes = np.concatenate([u, 1j * v])
        return EvolvedState(amplitudes=amplitudes, step=step, norm=float(np.linalg.norm(amplitudes)))

    @staticmethod
    def real_step(u, v, H, dt: float) -> tuple[np.ndarray, np.ndarray]:
        """u' = u + dt B v, v' = v - dt C u for H = [[0, B], [C, 0]]."""
        H = np.asarray(H)
        half = H.shape[0] // 2
        B = H[:half, half:].real
        C = H[half:, :half].real
        return u + dt * (B @ v), v - dt * (C @ u)

    @staticmethod
    def write_trace_csv(trace: ReferenceTrace, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["step", "component_index", "real_part", "imag_part", "norm"])
            for state in trace.states:
                norm = format(state.norm, ".17g")
                for index, amplitude in enumerate(state.amplitudes):
                    writer.writerow([
                        state.step,
                        index,
                        format(amplitude.real, ".17g"),
                        format(amplitude.imag, ".17g"),
                        norm,
                    ])
        return path
