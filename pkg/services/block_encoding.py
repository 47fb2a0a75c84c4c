import numpy as np

from core.errors import EncodingRangeError, InvalidInputError
from core.logging_config import get_logger
from models.enums import GateKind
from schemas.circuits import BlockEncodedOperator, EncodingCheck, Gate
from services.simulator import SimulatorService
from utils.linalg import unitarity_error
from utils.validators import is_power_of_two

logger = get_logger(__name__)

ENCODING_TOL = 1e-10


def _bits(value: int, width: int) -> list[int]:
    """Most significant bit first."""
    return [(value >> (width - 1 - position)) & 1 for position in range(width)]


def _hadamards(qubits) -> list[Gate]:
    return [Gate(kind=GateKind.HADAMARD, target=qubit) for qubit in qubits]


class BlockEncodingService:
    @staticmethod
    def _encoding_width(M: np.ndarray) -> int:
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise InvalidInputError("encoded matrix must be square", shape=list(M.shape))
        size = M.shape[0]
        if size < 2 or not is_power_of_two(size):
            raise InvalidInputError("encoded matrix size must be 2^n with n >= 1", size=size)
        return size.bit_length() - 1

    @staticmethod
    def _as_encodable(M) -> np.ndarray:
        M = np.asarray(M)
        if np.iscomplexobj(M):
            if np.max(np.abs(M.imag), initial=0.0) > 0.0:
                raise EncodingRangeError("only real matrices can be encoded")
            M = M.real
        M = np.asarray(M, dtype=float)
        if not np.all(np.isfinite(M)):
            raise EncodingRangeError("encoded matrix must be finite")

        outside = np.abs(M) > 1.0
        if np.any(outside):
            row, col = (int(index) for index in np.argwhere(outside)[0])
            raise EncodingRangeError(
                "matrix entry exceeds 1 in magnitude",
                row=row, col=col, value=float(M[row, col]),
            )
        return M

    @staticmethod
    def build_oracle_oa(M) -> list[Gate]:
        """One RotY(2 arccos m_ij) on the ancilla per entry, controlled on |i>|j>.

        Qubit 0 is the ancilla, qubits 1..n hold i and qubits n+1..2n hold j.
        """
        M = BlockEncodingService._as_encodable(M)
        n = BlockEncodingService._encoding_width(M)
        size = M.shape[0]

        gates = []
        for i in range(size):
            row_controls = list(zip(range(1, n + 1), _bits(i, n)))
            for j in range(size):
                col_controls = list(zip(range(n + 1, 2 * n + 1), _bits(j, n)))
                gates.append(Gate(
                    kind=GateKind.ROT_Y,
                    target=0,
                    controls=tuple(row_controls + col_controls),
                    angle=2.0 * float(np.arccos(M[i, j])),
                ))
        return gates

    @staticmethod
    def build_oracle_ob(n: int, offset: int = 1) -> list[Gate]:
        """Swap network |i>|j> -> |j>|i> between two n-qubit registers starting at `offset`."""
        if n < 1:
            raise InvalidInputError("register width must be >= 1", n=n)
        return [
            Gate(kind=GateKind.SWAP, target=offset + q, partner=offset + n + q)
            for q in range(n)
        ]

    @staticmethod
    def assemble_ua(M) -> BlockEncodedOperator:
        """U_A = (I x H^n x I)(I x SWAP) O_A (I x H^n x I); top-left block is M / 2^n."""
        M = BlockEncodingService._as_encodable(M)
        n = BlockEncodingService._encoding_width(M)

        first_register = range(1, n + 1)
        gates = (
            _hadamards(first_register)
            + BlockEncodingService.build_oracle_oa(M)
            + BlockEncodingService.build_oracle_ob(n)
            + _hadamards(first_register)
        )
        return BlockEncodedOperator(n=n, gates=tuple(gates), alpha=1.0 / 2**n, matrix=M)

    @staticmethod
    def _basis_outputs(op: BlockEncodedOperator, columns: int) -> np.ndarray:
        """U applied to basis inputs 0..columns-1, one output per column."""
        size = 2**op.total_qubits
        inputs = np.zeros((size, columns))
        inputs[np.arange(columns), np.arange(columns)] = 1.0
        return SimulatorService.run_array(inputs, op.gates)

    @staticmethod
    def extract_encoded_block(op: BlockEncodedOperator) -> np.ndarray:
        """<0..0, i| U_A |0..0, j> for all i, j."""
        block = 2**op.n
        return BlockEncodingService._basis_outputs(op, block)[:block, :]

    @staticmethod
    def unitary_matrix(op: BlockEncodedOperator) -> np.ndarray:
        return BlockEncodingService._basis_outputs(op, 2**op.total_qubits)

    @staticmethod
    def step_operator_matrix(H, dt: float) -> np.ndarray:
        """R = [[I, dt B], [-dt C, I]] for H = [[0, B], [C, 0]].

        R acting on real coordinates (u, v) equals I - i H dt acting on (u, i v).
        """
        H = np.asarray(H)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] % 2:
            raise InvalidInputError("step Hamiltonian must be square with even size", shape=list(H.shape))
        half = H.shape[0] // 2

        diagonal = max(
            np.max(np.abs(H[:half, :half]), initial=0.0),
            np.max(np.abs(H[half:, half:]), initial=0.0),
        )
        if diagonal > 1e-12:
            raise InvalidInputError("step Hamiltonian has nonzero diagonal blocks", max_entry=float(diagonal))
        if np.iscomplexobj(H) and np.max(np.abs(H.imag), initial=0.0) > 1e-12:
            raise InvalidInputError("step Hamiltonian blocks must be real")

        H = H.real
        R = np.eye(2 * half)
        R[:half, half:] = dt * H[:half, half:]
        R[half:, :half] = -dt * H[half:, :half]
        return R

    @staticmethod
    def circuit_depth(gates, num_qubits: int) -> int:
        """Greedy as-soon-as-possible layering; every gate (of any arity) is one layer."""
        levels = [0] * num_qubits
        for gate in gates:
            layer = max(levels[qubit] for qubit in gate.qubits) + 1
            for qubit in gate.qubits:
                levels[qubit] = layer
        return max(levels, default=0)

    @staticmethod
    def dump_program(op: BlockEncodedOperator) -> str:
        """One gate per line: `KIND target [qubit:bit ...] [angle]`."""
        lines = []
        for gate in op.gates:
            parts = [gate.kind.name, str(gate.target)]
            if gate.partner is not None:
                parts.append(str(gate.partner))
            parts.extend(f"{qubit}:{bit}" for qubit, bit in gate.controls)
            if gate.angle is not None:
                parts.append(format(gate.angle, ".17g"))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @staticmethod
    def verify_encoding(n: int, trials: int, seed: int = 0) -> EncodingCheck:
        """Encode `trials` random matrices with entries in [-1, 1] and check block and unitarity."""
        if n < 1 or trials < 1:
            raise InvalidInputError("n and trials must be >= 1", n=n, trials=trials)
        rng = np.random.default_rng(seed)
        block_error = 0.0
        unitary_error = 0.0

        for _ in range(trials):
            M = rng.uniform(-1.0, 1.0, (2**n, 2**n))
            op = BlockEncodingService.assemble_ua(M)
            block = BlockEncodingService.extract_encoded_block(op)
            block_error = max(block_error, float(np.max(np.abs(block - M * op.alpha))))
            unitary_error = max(unitary_error, unitarity_error(BlockEncodingService.unitary_matrix(op)))

        check = EncodingCheck(
            n=n, trials=trials,
            max_block_error=block_error, max_unitarity_error=unitary_error, tolerance=ENCODING_TOL,
        )
        logger.info(
            "Encoding verified",
            extra={"n": n, "trials": trials, "max_block_error": block_error, "passed": check.passed},
        )
        return check
