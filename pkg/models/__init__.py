from models.enums import (
    DispatchMode,
    EngineKind,
    ErrorCode,
    EvolutionMode,
    GateKind,
    NoiseModel,
    RunStatus,
    ScheduleKind,
)

__all__ = ["DispatchMode", "EngineKind", "ErrorCode", "EvolutionMode", "GateKind",
           "NoiseModel", "RunStatus", "ScheduleKind"]
