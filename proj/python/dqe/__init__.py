"""Metadata-driven data quality for tabular warehouses.

Thin re-export of the native module. The library speaks plain data:
warehouses are opaque handles, everything else crosses as dicts and
lists shaped exactly like the on-disk JSON.
"""

from ._core import (  # noqa: F401
    Error,
    InputError,
    MeasurementMissingError,
    ParseError,
    QualityModel,
    StorageError,
    Warehouse,
    admit,
    audit,
    correct,
    evaluate,
    filter_elements,
    filter_groups,
    filter_rows,
    find_violations,
    lint_pipeline,
    load_warehouse,
    measure,
    replay_log,
    run_cli,
    save_warehouse,
    validate_model,
)

__all__ = [
    "Error",
    "InputError",
    "MeasurementMissingError",
    "ParseError",
    "QualityModel",
    "StorageError",
    "Warehouse",
    "admit",
    "audit",
    "correct",
    "evaluate",
    "filter_elements",
    "filter_groups",
    "filter_rows",
    "find_violations",
    "lint_pipeline",
    "load_warehouse",
    "measure",
    "replay_log",
    "run_cli",
    "save_warehouse",
    "validate_model",
]
