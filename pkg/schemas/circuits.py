import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.enums import GateKind
from schemas.arrays import RealArray


class Gate(BaseModel):
    """One gate of a program.

    `controls` is a tuple of (qubit, required bit value). A SWAP exchanges `target`
    with `partner`. Qubit 0 is the most significant bit of the basis index.
    """
    model_config = ConfigDict(frozen=True)

    kind: GateKind
    target: int = Field(ge=0)
    partner: Optional[int] = Field(default=None, ge=0)
    controls: tuple[tuple[int, int], ...] = ()
    angle: Optional[float] = None

    @model_validator(mode="after")
    def check_gate(self):
        if self.kind == GateKind.ROT_Y:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError("RotY needs a finite angle")
        if self.kind == GateKind.SWAP and self.partner is None:
            raise ValueError("Swap needs a partner qubit")
        if self.kind != GateKind.SWAP and self.partner is not None:
            raise ValueError(f"{self.kind.value} takes no partner qubit")

        for qubit, bit in self.controls:
            if bit not in (0, 1):
                raise ValueError(f"control bit must be 0 or 1, got {bit}")
            if qubit < 0:
                raise ValueError("control qubit index must be non-negative")
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"gate qubits must be distinct, got {qubits}")
        return self

    @property
    def qubits(self) -> tuple[int, ...]:
        touched = [self.target]
        if self.partner is not None:
            touched.append(self.partner)
        touched.extend(qubit for qubit, _ in self.controls)
        return tuple(touched)


class BlockEncodedOperator(BaseModel):
    """Gate program realizing U_A for a 2^n x 2^n matrix.

    Register layout, top to bottom: one rotation ancilla (qubit 0), the first index
    register (qubits 1..n), the second index register (qubits n+1..2n). The first
    n + 1 qubits are the ancillas; projecting them onto |0...0> leaves alpha * M acting
    on the second register.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(ge=1)
    gates: tuple[Gate, ...]
    alpha: float
    matrix: RealArray

    @model_validator(mode="after")
    def check_operator(self):
        width = self.total_qubits
        for gate in self.gates:
            if max(gate.qubits) >= width:
                raise ValueError(f"gate {gate.kind.value} touches qubit outside {width}-qubit register")
        if self.matrix.shape != (2**self.n, 2**self.n):
            raise ValueError("encoded matrix does not match register width")
        return self

    @property
    def total_qubits(self) -> int:
        return 2 * self.n + 1

    @property
    def ancilla_count(self) -> int:
        return self.n + 1

    @property
    def ancilla_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.ancilla_count))


class EncodingCheck(BaseModel):
    n: int
    trials: int
    max_block_error: float
    max_unitarity_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_block_error <= self.tolerance and self.max_unitarity_error <= self.tolerance
