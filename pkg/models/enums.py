from enum import Enum

class NoiseModel(str, Enum):
    NONE = "none"
    MEASUREMENT_GAUSSIAN = "measurement_gaussian"
    DEPOLARIZING = "depolarizing"

class EngineKind(str, Enum):
    CIRCUIT = "circuit"
    DENSE = "dense"

class EvolutionMode(str, Enum):
    FIRST_ORDER = "first_order"
    EXACT = "exact"

class ScheduleKind(str, Enum):
    LINEAR = "linear"

class GateKind(str, Enum):
    HADAMARD = "hadamard"
    ROT_Y = "rot_y"
    PAULI_X = "pauli_x"
    SWAP = "swap"

class DispatchMode(str, Enum):
    LOCAL = "local"
    CELERY = "celery"

class RunStatus(str, Enum):
    OK = "ok"
    MODIFY_REQUIRED = "modify_required"
    POSTSELECTION_FAILED = "postselection_failed"
    FAILED = "failed"

class ErrorCode(str, Enum):
    INVALID_INPUT = "invalid_input"
    NOT_HERMITIAN = "not_hermitian"
    SINGULAR_MATRIX = "singular_matrix"
    ENCODING_RANGE = "encoding_range"
    FORM_VIOLATION = "form_violation"
    SCHEDULE_GUARD = "schedule_guard"
    VANISHING_POSTSELECTION = "vanishing_postselection"
    TRUNCATION_REJECTED = "truncation_rejected"
    SCHEMA_MISMATCH = "schema_mismatch"
