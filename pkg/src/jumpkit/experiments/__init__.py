"""Experiment harness: configs, runners, and result tables."""

from .config import (
    BodySpecModel,
    BoundaryMeasureConfig,
    DimensionSweepConfig,
    ExperimentConfig,
    FixedPathSpec,
    JumpCorpusConfig,
    SymbolEnvelopeConfig,
    VdcSweepConfig,
    canonical_json,
    config_hash,
    parse_config,
)
from .runners import (
    convex_path_ratios,
    cube_path_ratios,
    run_boundary_measure,
    run_dimension_sweep,
    run_experiment,
    run_jump_corpus,
    run_symbol_envelope,
    run_vdc_sweep,
)
from .tables import (
    CSV_COLUMNS,
    SCHEMA,
    ResultRow,
    ResultTable,
    emit_report,
    parse_report,
    render_report,
)

__all__ = [
    "BodySpecModel",
    "BoundaryMeasureConfig",
    "CSV_COLUMNS",
    "DimensionSweepConfig",
    "ExperimentConfig",
    "FixedPathSpec",
    "JumpCorpusConfig",
    "ResultRow",
    "ResultTable",
    "SCHEMA",
    "SymbolEnvelopeConfig",
    "VdcSweepConfig",
    "canonical_json",
    "config_hash",
    "convex_path_ratios",
    "cube_path_ratios",
    "emit_report",
    "parse_config",
    "parse_report",
    "render_report",
    "run_boundary_measure",
    "run_dimension_sweep",
    "run_experiment",
    "run_jump_corpus",
    "run_symbol_envelope",
    "run_vdc_sweep",
]
