"""commonslint: a linter and metadata toolkit for data-commons repositories.

Validates measure_info metadata against a fixed schema, runs the T2-T14
check catalog over repository trees, expands dynamic metadata, scores FAIR
maturity self-assessments, and renders static HTML/JSON reports plus a
data dictionary.
"""

from __future__ import annotations

from .checks import (
    CHECK_NAMES,
    CHECK_ORDER,
    VERDICTS,
    CheckId,
    CheckItem,
    CheckReport,
    SuiteReport,
    check_file_conventions,
    check_info_structure,
    check_json_valid,
    check_percent_range,
    check_tabular_conventions,
    cross_check_measures,
    format_percentage,
    run_suite,
)
from .config import CheckSettings, RepoConfig, default_config, load_config, parse_config
from .errors import (
    CommonsLintError,
    ConfigError,
    DomainError,
    DuplicateKeyError,
    ExpansionError,
    ParseError,
    RegistryError,
    RenderError,
    UnknownIndicatorError,
    UnknownPrincipleError,
)
from .expansion import expand_dynamic, expand_file, parse_axis
from .fair import (
    FairAssessment,
    FairReport,
    Indicator,
    convert_checklist,
    load_indicator_registry,
    read_assessment_file,
    score_assessment,
)
from .metadata import (
    MeasureEntry,
    MeasureInfoFile,
    load_measure_info,
    parse_measure_info,
    resolve_citations,
    serialize_measure_info,
)
from .reports import render_dictionary, render_fair, render_suite
from .scanner import ClassifiedFile, DataTable, RepoSnapshot, parse_data_table, scan_repo
from .schema import (
    CORE_ELEMENTS,
    SchemaConfig,
    check_char_limits,
    customized_schema,
    default_schema,
    validate_entry_keys,
)
from .statements import extract_placeholders, format_value, render_statement

__version__ = "1.0.0"

__all__ = [
    "CHECK_NAMES",
    "CHECK_ORDER",
    "CORE_ELEMENTS",
    "VERDICTS",
    "CheckId",
    "CheckItem",
    "CheckReport",
    "CheckSettings",
    "ClassifiedFile",
    "CommonsLintError",
    "ConfigError",
    "DataTable",
    "DomainError",
    "DuplicateKeyError",
    "ExpansionError",
    "FairAssessment",
    "FairReport",
    "Indicator",
    "MeasureEntry",
    "MeasureInfoFile",
    "ParseError",
    "RegistryError",
    "RenderError",
    "RepoConfig",
    "RepoSnapshot",
    "SchemaConfig",
    "SuiteReport",
    "UnknownIndicatorError",
    "UnknownPrincipleError",
    "check_char_limits",
    "check_file_conventions",
    "check_info_structure",
    "check_json_valid",
    "check_percent_range",
    "check_tabular_conventions",
    "convert_checklist",
    "cross_check_measures",
    "customized_schema",
    "default_config",
    "default_schema",
    "expand_dynamic",
    "expand_file",
    "extract_placeholders",
    "format_percentage",
    "format_value",
    "load_config",
    "load_indicator_registry",
    "load_measure_info",
    "parse_axis",
    "parse_config",
    "parse_data_table",
    "parse_measure_info",
    "read_assessment_file",
    "render_dictionary",
    "render_fair",
    "render_statement",
    "render_suite",
    "resolve_citations",
    "run_suite",
    "scan_repo",
    "score_assessment",
    "serialize_measure_info",
    "validate_entry_keys",
    "__version__",
]
