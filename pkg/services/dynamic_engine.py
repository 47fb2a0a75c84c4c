import time
from functools import lru_cache
from typing import Optional

import numpy as np

from core.config import settings
from core.errors import InvalidInputError, VanishingPostselectionError
from core.logging_config import get_logger
from models.enums import EngineKind, NoiseModel
from schemas.hamiltonians import Schedule
from schemas.instances import LinearSystemInstance
from schemas.simulator import NoiseConfig, StateVector
from schemas.traces import DepthReport, EvolutionTrace, SegmentRecord
from services.block_encoding import BlockEncodingService
from services.hamiltonians import HamiltonianService
from services.postprocess import PostprocessService
from services.simulator import POSTSELECTION_FLOOR, SimulatorService

logger = get_logger(__name__)

# one abstract unit per segment for direct amplitude initialization
STATE_PREP_DEPTH = 1


@lru_cache(maxsize=None)
def _segment_profile(n: int) -> tuple[int, int, int]:
    """(depth, gate count, qubits) of one segment encoding a 2^n x 2^n step operator.

    The program shape depends only on n, so the identity stands in for R_k.
    """
    op = BlockEncodingService.assemble_ua(np.eye(2**n))
    depth = BlockEncodingService.circuit_depth(op.gates, op.total_qubits) + STATE_PREP_DEPTH
    return depth, len(op.gates), op.total_qubits


class DynamicEngineService:
    @staticmethod
    def resolve_delta(noise: Optional[NoiseConfig] = None) -> float:
        """delta = max(DELTA_FLOOR, DELTA_SIGMA_FACTOR * sigma)."""
        sigma = noise.sigma if noise is not None else 0.0
        return max(settings.DELTA_FLOOR, settings.DELTA_SIGMA_FACTOR * sigma)

    @staticmethod
    def predict_signs(x_prev, x_prev2, magnitudes, delta: float) -> np.ndarray:
        """Sign of each next component from the two previous reconstructed vectors.

        Components already below `delta` may be crossing zero, so their sign comes from
        the linear extrapolation 2 x_prev - x_prev2; the rest keep the sign of x_prev.
        sgn(0) = +1.
        """
        x_prev = np.asarray(x_prev, dtype=float)
        x_prev2 = np.asarray(x_prev2, dtype=float)
        magnitudes = np.asarray(magnitudes, dtype=float)
        if not (x_prev.shape == x_prev2.shape == magnitudes.shape):
            raise InvalidInputError(
                "sign prediction inputs must have equal length",
                lengths=[x_prev.size, x_prev2.size, magnitudes.size],
            )
        if delta <= 0:
            raise InvalidInputError("delta must be positive", delta=delta)

        guide = np.where(np.abs(x_prev) < delta, 2.0 * x_prev - x_prev2, x_prev)
        return np.where(guide >= 0.0, 1.0, -1.0)

    @staticmethod
    def _encoded_step(w: np.ndarray, R: np.ndarray, n: int, engine: EngineKind) -> tuple[StateVector, float]:
        """Post-selected output of one segment and its success probability."""
        if engine == EngineKind.CIRCUIT:
            op = BlockEncodingService.assemble_ua(R)
            state = SimulatorService.with_ancillas(SimulatorService.prepare_state(w), op.ancilla_count)
            out = SimulatorService.run_circuit(state, op.gates)
            return SimulatorService.postselect_ancillas(out, op.ancilla_qubits)

        out = R @ w
        probability = float(out @ out) / 4**n
        if probability < POSTSELECTION_FLOOR:
            raise VanishingPostselectionError("post-selection probability vanished", probability=probability)
        return StateVector(amplitudes=out / np.linalg.norm(out), num_qubits=n), probability

    @staticmethod
    def run_segmented_solve(
        instance: LinearSystemInstance,
        schedule: Schedule,
        noise: Optional[NoiseConfig] = None,
        engine: EngineKind = EngineKind.DENSE,
        delta: Optional[float] = None,
        seed: int = 0,
        classical_bootstrap: bool = True,
    ) -> EvolutionTrace:
        """Segmented dynamic-circuit solve.

        Per step k: encode R_k, run the segment on the current vector (u, v), post-select,
        measure, predict signs, rebuild and renormalize the vector. The noise stream of
        step k is seeded with seed + k.

        The v half of the initial vector is exactly zero and carries no sign, so with
        `classical_bootstrap` the first segment takes its signs from R_1 (b, 0), which is
        classically known. With it off, step 1 persists the initial signs (sgn(0) = +1).
        """
        noise = noise or NoiseConfig()
        delta = delta if delta is not None else DynamicEngineService.resolve_delta(noise)
        started = time.perf_counter()

        pair = HamiltonianService.build_pair(instance)
        HamiltonianService.validate_schedule(pair, schedule)

        n = (2 * instance.dim).bit_length() - 1
        segment_depth = _segment_profile(n)[0]

        # initial signs are classically known from b
        w = np.concatenate([instance.b, np.zeros(instance.dim)])
        x_prev, x_prev2 = w, w
        records = []

        for k in range(1, schedule.steps + 1):
            H = HamiltonianService.interpolate(pair, schedule.s_at(k))
            R = BlockEncodingService.step_operator_matrix(H, schedule.dt)
            rng = np.random.default_rng(seed + k)

            try:
                reduced, success = DynamicEngineService._encoded_step(w, R, n, engine)
            except VanishingPostselectionError as exc:
                logger.error(
                    "Post-selection vanished",
                    extra={"dim": instance.dim, "kappa": instance.kappa, "step": k, "seed": seed},
                )
                raise VanishingPostselectionError(exc.message, step=k, **exc.context) from exc

            if noise.model == NoiseModel.DEPOLARIZING and noise.strength > 0:
                reduced = SimulatorService.apply_depolarizing(reduced, noise.strength, rng)

            probabilities = SimulatorService.measure_probabilities(reduced, noise, rng)
            magnitudes = np.sqrt(probabilities)
            if k == 1 and classical_bootstrap:
                signs = np.where(R @ w >= 0.0, 1.0, -1.0)
            else:
                signs = DynamicEngineService.predict_signs(x_prev, x_prev2, magnitudes, delta)
            w = PostprocessService.renormalize(signs * magnitudes)

            records.append(SegmentRecord(
                step=k,
                probabilities=probabilities,
                signs=signs,
                vector=w,
                success_probability=min(success, 1.0),
                segment_depth=segment_depth,
            ))
            x_prev2, x_prev = x_prev, w

        result = PostprocessService.finalize(w, instance, schedule.steps)
        wall_ms = (time.perf_counter() - started) * 1000

        logger.info(
            "Segmented solve finished",
            extra={
                "dim": instance.dim,
                "kappa": instance.kappa,
                "steps": schedule.steps,
                "engine": engine.value,
                "fidelity": result.fidelity,
                "imag_residual": result.imag_residual,
                "duration_ms": round(wall_ms, 2),
            },
        )
        return EvolutionTrace(
            instance=instance,
            schedule=schedule,
            engine=engine,
            noise=noise,
            delta=delta,
            seed=seed,
            records=records,
            final_state=w,
            result=result,
            wall_ms=wall_ms,
        )

    @staticmethod
    def depth_report(instance: LinearSystemInstance, schedule: Schedule) -> DepthReport:
        """Depth of one segment versus a conventional circuit chaining all L segments."""
        n = (2 * instance.dim).bit_length() - 1
        segment_depth, gate_count, qubits = _segment_profile(n)
        return DepthReport(
            segment_depth=segment_depth,
            dynamic_total=segment_depth,
            conventional_total=schedule.steps * segment_depth,
            gate_count=gate_count,
            qubits=qubits,
            steps=schedule.steps,
        )
