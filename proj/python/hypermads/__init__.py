"""Mesh adaptive direct search over the hyperparameters of a small CNN."""

from ._core import (
    ConvLayerGroup,
    EvalRecord,
    EvalStatus,
    FeasibilityReport,
    HpKind,
    HyperparameterDef,
    Point,
    RunConfig,
    RunResult,
    SpaceSpec,
    ValidationIssue,
    architecture_feasible,
    decode,
    default_point,
    dimension,
    encode,
    initial_point,
    minimize,
    neighbors,
    parse_params,
    parse_params_file,
    run,
    validate,
    validate_flat,
)

__version__ = "1.0.0"

__all__ = [
    "ConvLayerGroup",
    "EvalRecord",
    "EvalStatus",
    "FeasibilityReport",
    "HpKind",
    "HyperparameterDef",
    "Point",
    "RunConfig",
    "RunResult",
    "SpaceSpec",
    "ValidationIssue",
    "architecture_feasible",
    "decode",
    "default_point",
    "dimension",
    "encode",
    "initial_point",
    "minimize",
    "neighbors",
    "parse_params",
    "parse_params_file",
    "run",
    "validate",
    "validate_flat",
]
