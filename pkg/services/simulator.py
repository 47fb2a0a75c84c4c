"""
Dense statevector engine.

Amplitude index bit order: qubit 0 is the most significant bit. Gate application
reshapes the amplitudes to one axis per qubit, so every function here also accepts a
trailing batch axis (one column per simulated input), which the block-encoding service
uses to run all basis inputs at once.
"""
from typing import Optional

import numpy as np

from core.errors import InvalidInputError, VanishingPostselectionError
from core.logging_config import get_logger
from models.enums import GateKind, NoiseModel
from schemas.circuits import Gate
from schemas.simulator import NoiseConfig, StateVector
from utils.validators import is_power_of_two

logger = get_logger(__name__)

POSTSELECTION_FLOOR = 1e-14

_SQRT2_INV = 1 / np.sqrt(2)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=float) * _SQRT2_INV
_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _rot_y(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]])


def _gate_matrix(gate: Gate) -> np.ndarray:
    if gate.kind == GateKind.HADAMARD:
        return _HADAMARD
    if gate.kind == GateKind.ROT_Y:
        return _rot_y(gate.angle)
    if gate.kind == GateKind.PAULI_X:
        return _PAULI["X"].real
    raise InvalidInputError("gate has no single-qubit matrix", kind=gate.kind.value)


def _num_qubits(amplitudes: np.ndarray) -> int:
    size = amplitudes.shape[0]
    if not is_power_of_two(size):
        raise InvalidInputError("amplitude count must be a power of two", length=size)
    return size.bit_length() - 1


def _apply_matrix(amplitudes: np.ndarray, matrix: np.ndarray, target: int, controls=()) -> np.ndarray:
    n = _num_qubits(amplitudes)
    batch = amplitudes.shape[1:]
    dtype = np.result_type(amplitudes.dtype, matrix.dtype)
    out = np.array(amplitudes, dtype=dtype).reshape([2] * n + list(batch))

    def idx(bit):
        i = [slice(None)] * n
        for qubit, value in controls:
            i[qubit] = value
        i[target] = bit
        return tuple(i)

    a0, a1 = out[idx(0)].copy(), out[idx(1)].copy()
    out[idx(0)] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    out[idx(1)] = matrix[1, 0] * a0 + matrix[1, 1] * a1
    return out.reshape(amplitudes.shape)


def _apply_swap(amplitudes: np.ndarray, q0: int, q1: int, controls=()) -> np.ndarray:
    n = _num_qubits(amplitudes)
    out = np.array(amplitudes).reshape([2] * n + list(amplitudes.shape[1:]))

    def idx(v0, v1):
        i = [slice(None)] * n
        for qubit, value in controls:
            i[qubit] = value
        i[q0], i[q1] = v0, v1
        return tuple(i)

    out[idx(0, 1)], out[idx(1, 0)] = out[idx(1, 0)].copy(), out[idx(0, 1)].copy()
    return out.reshape(amplitudes.shape)


class SimulatorService:
    @staticmethod
    def apply_array(amplitudes: np.ndarray, gate: Gate) -> np.ndarray:
        """Apply one gate to raw amplitudes (optionally with a trailing batch axis)."""
        n = _num_qubits(amplitudes)
        if max(gate.qubits) >= n:
            raise InvalidInputError(
                "gate qubit index out of range",
                kind=gate.kind.value, qubits=list(gate.qubits), num_qubits=n,
            )
        if gate.kind == GateKind.SWAP:
            return _apply_swap(amplitudes, gate.target, gate.partner, gate.controls)
        return _apply_matrix(amplitudes, _gate_matrix(gate), gate.target, gate.controls)

    @staticmethod
    def run_array(amplitudes: np.ndarray, gates) -> np.ndarray:
        for gate in gates:
            amplitudes = SimulatorService.apply_array(amplitudes, gate)
        return amplitudes

    @staticmethod
    def apply_gate(state: StateVector, gate: Gate) -> StateVector:
        amplitudes = SimulatorService.apply_array(state.amplitudes, gate)
        return StateVector(amplitudes=amplitudes, num_qubits=state.num_qubits)

    @staticmethod
    def run_circuit(state: StateVector, gates) -> StateVector:
        amplitudes = SimulatorService.run_array(state.amplitudes, gates)
        return StateVector(amplitudes=amplitudes, num_qubits=state.num_qubits)

    @staticmethod
    def prepare_state(vector) -> StateVector:
        """Direct amplitude initialization of a unit vector of length 2^n."""
        vector = np.asarray(vector)
        if vector.ndim != 1:
            raise InvalidInputError("state must be a vector", shape=list(vector.shape))
        n = _num_qubits(vector)
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > 1e-10:
            raise InvalidInputError("state must have unit norm", norm=norm)
        return StateVector(amplitudes=vector, num_qubits=n)

    @staticmethod
    def with_ancillas(state: StateVector, count: int) -> StateVector:
        """Prepend `count` ancilla qubits in |0>; the ancillas become qubits 0..count-1."""
        padding = np.zeros((2**count - 1) * state.amplitudes.shape[0], dtype=state.amplitudes.dtype)
        return StateVector(
            amplitudes=np.concatenate([state.amplitudes, padding]),
            num_qubits=state.num_qubits + count,
        )

    @staticmethod
    def project_array(amplitudes: np.ndarray, ancilla_qubits) -> np.ndarray:
        """Component with every listed qubit in |0>, the remaining qubits kept in order."""
        n = _num_qubits(amplitudes)
        batch = amplitudes.shape[1:]
        view = np.asarray(amplitudes).reshape([2] * n + list(batch))
        i = [slice(None)] * n
        for qubit in ancilla_qubits:
            i[qubit] = 0
        kept = n - len(set(ancilla_qubits))
        return view[tuple(i)].reshape([2**kept] + list(batch))

    @staticmethod
    def postselect_ancillas(state: StateVector, ancilla_qubits) -> tuple[StateVector, float]:
        ancilla_qubits = list(ancilla_qubits)
        if not ancilla_qubits:
            raise InvalidInputError("ancilla set must be non-empty")
        if max(ancilla_qubits) >= state.num_qubits or min(ancilla_qubits) < 0:
            raise InvalidInputError("ancilla index out of range", ancillas=ancilla_qubits, num_qubits=state.num_qubits)

        survivor = SimulatorService.project_array(state.amplitudes, ancilla_qubits)
        probability = float(np.vdot(survivor, survivor).real)
        if probability < POSTSELECTION_FLOOR:
            raise VanishingPostselectionError("post-selection probability vanished", probability=probability)

        reduced = StateVector(
            amplitudes=survivor / np.sqrt(probability),
            num_qubits=state.num_qubits - len(set(ancilla_qubits)),
        )
        return reduced, probability

    @staticmethod
    def sample_counts(probabilities, shots: int, rng: np.random.Generator) -> np.ndarray:
        """Multinomial outcome counts for `shots` repetitions."""
        if shots < 1:
            raise InvalidInputError("shots must be >= 1", shots=shots)
        probabilities = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
        return rng.multinomial(shots, probabilities / probabilities.sum())

    @staticmethod
    def measure_probabilities(
        state: StateVector,
        noise: Optional[NoiseConfig] = None,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        """Born-rule probabilities, perturbed and/or sampled according to `noise`."""
        noise = noise or NoiseConfig()
        probabilities = np.abs(state.amplitudes) ** 2

        if noise.model == NoiseModel.MEASUREMENT_GAUSSIAN and noise.strength > 0:
            rng = rng if rng is not None else np.random.default_rng()
            perturbed = np.clip(probabilities + rng.normal(0.0, noise.strength, probabilities.shape), 0.0, None)
            total = perturbed.sum()
            # every entry clamped away: keep the exact distribution
            probabilities = perturbed / total if total > 0 else probabilities

        if noise.shots is not None:
            rng = rng if rng is not None else np.random.default_rng()
            counts = SimulatorService.sample_counts(probabilities, noise.shots, rng)
            return counts / noise.shots

        return probabilities / probabilities.sum()

    @staticmethod
    def _draw_pauli(p: float, num_qubits: int, rng: np.random.Generator) -> Optional[tuple[str, int]]:
        """One trajectory draw: None (no error) or (pauli, qubit)."""
        if rng.random() >= p:
            return None
        pauli = ("X", "Y", "Z")[rng.integers(3)]
        return pauli, int(rng.integers(num_qubits))

    @staticmethod
    def apply_depolarizing(state: StateVector, p: float, rng: np.random.Generator) -> StateVector:
        """With probability p apply a uniformly random Pauli to a uniformly random qubit."""
        if not 0.0 <= p <= 1.0:
            raise InvalidInputError("depolarizing probability must lie in [0, 1]", p=p)
        draw = SimulatorService._draw_pauli(p, state.num_qubits, rng)
        if draw is None:
            return state
        pauli, qubit = draw
        amplitudes = _apply_matrix(state.amplitudes, _PAULI[pauli], qubit)
        return StateVector(amplitudes=amplitudes, num_qubits=state.num_qubits)
