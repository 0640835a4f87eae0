"""The validation catalog: checks T2-T14 over a repository snapshot.

Every check is a pure function of (snapshot, config) producing a
CheckReport whose items carry one of the closed verdicts. Checks never
raise for repository defects — defects become items — so a suite run
always completes. Check ids and report names are frozen; the catalog
starts at T2 and the gap is deliberate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import PurePosixPath

from .config import RepoConfig, CheckSettings, default_config
from .errors import ConfigError, DomainError, ExpansionError
from .expansion import expand_dynamic
from .metadata import MeasureInfoFile
from .scanner import DataTable, ParseFailure, RepoSnapshot
from .schema import REFERENCES_KEY, validate_entry_keys

CHECK_NAMES: dict[str, str] = {
    "T2": "test_percent_data",
    "T3": "test_measure_info_structure",
    "T4": "test_measure_type",
    "T5": "test_measure_info_missing_measures",
    "T6": "test_columns",
    "T7": "test_measure_info_keys",
    "T8": "test_jsons",
    "T9": "test_region_type",
    "T10": "test_known_measures",
    "T11": "test_file_name",
    "T12": "test_code_exists",
    "T13": "test_file_name_len",
    "T14": "test_measure_info_extra_measures",
}

CHECK_ORDER: tuple[str, ...] = tuple(sorted(CHECK_NAMES, key=lambda cid: int(cid[1:])))

VERDICTS = ("valid", "invalid", "missing", "extra", "error", "skipped")
_DETAIL_REQUIRED = {"invalid", "missing", "extra", "error"}


@dataclass(frozen=True)
class CheckId:
    """A catalog entry: frozen id and its report filename stem."""

    id: str
    name: str


def check_id(cid: str) -> CheckId:
    if cid not in CHECK_NAMES:
        raise ConfigError(f"unknown check id: {cid} (known: {', '.join(CHECK_ORDER)})")
    return CheckId(id=cid, name=CHECK_NAMES[cid])


@dataclass(frozen=True)
class CheckItem:
    """One examined subject: a path, optionally narrowed by a key."""

    path: str
    verdict: str
    key: str | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict: {self.verdict!r}")
        if self.verdict in _DETAIL_REQUIRED and not self.detail:
            raise ValueError(f"{self.verdict} item for {self.path} needs a detail")


@dataclass(frozen=True)
class CheckReport:
    """All items one check produced, with verdict counts."""

    check: CheckId
    items: tuple[CheckItem, ...] = ()

    @property
    def counts(self) -> dict[str, int]:
        tally = {verdict: 0 for verdict in VERDICTS}
        for item in self.items:
            tally[item.verdict] += 1
        return tally

    @property
    def total(self) -> int:
        return len(self.items)

    @property
    def passed(self) -> bool:
        return all(item.verdict in ("valid", "skipped") for item in self.items)

    def summary_line(self) -> str:
        """e.g. '141/234 (60.3%) valid' — or 'nothing to check' when empty."""
        if self.total == 0:
            return "0/0 valid (nothing to check)"
        valid = self.counts["valid"] + self.counts["skipped"]
        return f"{valid}/{self.total} ({format_percentage(valid, self.total)}) valid"


@dataclass(frozen=True)
class SuiteReport:
    """Ordered reports for one run, plus the enforcement decision."""

    root: str
    reports: tuple[CheckReport, ...]
    enforcement: dict[str, str] = field(default_factory=dict)
    overall_pass: bool = True

    def report_for(self, cid: str) -> CheckReport:
        for report in self.reports:
            if report.check.id == cid:
                return report
        raise KeyError(cid)


def format_percentage(count: int, total: int) -> str:
    """Render 100*count/total to one decimal, ties away from zero, '%'-suffixed."""
    if total <= 0:
        raise DomainError(f"total must be positive, got {total}")
    if count < 0 or count > total:
        raise DomainError(f"count must be within [0, {total}], got {count}")
    pct = (Decimal(count) * 100 / Decimal(total)).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP
    )
    return f"{pct}%"


def _dir_of(path: str) -> str:
    parent = str(PurePosixPath(path).parent)
    return "" if parent == "." else parent


def _ancestor_dirs(path: str):
    """Directories from the file's own dir up to the repo root ('')."""
    current = _dir_of(path)
    while current:
        yield current
        parent = str(PurePosixPath(current).parent)
        current = "" if parent == "." else parent
    yield ""


@dataclass(frozen=True)
class _Pairing:
    """Nearest-ancestor association of data tables with measure_info files."""

    # table path → ("ok", info path) | ("none", "") | ("ambiguous", dir) | ("broken", info path)
    table_status: dict[str, tuple[str, str]]
    # info path → table paths it governs (only unambiguous, parsed infos)
    info_tables: dict[str, list[str]]
    # dirs holding more than one measure_info file
    ambiguous_dirs: dict[str, list[str]]


def _pair_tables(snapshot: RepoSnapshot) -> _Pairing:
    info_by_dir: dict[str, list] = {}
    for info in snapshot.measure_info_files:
        info_by_dir.setdefault(_dir_of(info.path), []).append(info)

    ambiguous_dirs = {
        d: sorted(i.path for i in infos)
        for d, infos in info_by_dir.items()
        if len(infos) > 1
    }

    table_status: dict[str, tuple[str, str]] = {}
    info_tables: dict[str, list[str]] = {
        info.path: [] for info in snapshot.measure_info_files
    }
    for table in snapshot.data_tables:
        status: tuple[str, str] = ("none", "")
        for ancestor in _ancestor_dirs(table.path):
            infos = info_by_dir.get(ancestor)
            if not infos:
                continue
            if len(infos) > 1:
                status = ("ambiguous", ancestor)
            elif isinstance(infos[0], ParseFailure):
                status = ("broken", infos[0].path)
            else:
                status = ("ok", infos[0].path)
                info_tables[infos[0].path].append(table.path)
            break
        table_status[table.path] = status
    return _Pairing(
        table_status=table_status, info_tables=info_tables, ambiguous_dirs=ambiguous_dirs
    )


def _expanded_ids(info: MeasureInfoFile) -> tuple[set[str], list[tuple[str, str]]]:
    """Concrete measure ids after dynamic expansion, plus per-entry failures."""
    ids: set[str] = set()
    failures: list[tuple[str, str]] = []
    for entry in info:
        try:
            ids.update(e.measure_id for e in expand_dynamic(entry))
        except ExpansionError as exc:
            failures.append((entry.measure_id, str(exc)))
            ids.add(entry.measure_id)
    return ids, failures


# ---------------------------------------------------------------- T2


def check_percent_range(snapshot: RepoSnapshot, config: RepoConfig | None = None) -> CheckReport:
    """T2: percent-typed measures stay within 0-100 and are not 0-1 fractions."""
    config = config or default_config()
    settings = config.check_settings("T2")
    items: list[CheckItem] = []
    for entry in snapshot.data_tables:
        if not settings.applies_to(entry.path):
            continue
        if isinstance(entry, ParseFailure):
            items.append(
                CheckItem(
                    path=entry.path,
                    verdict="error",
                    detail=f"table could not be parsed: {entry.message}",
                )
            )
            continue
        items.extend(_percent_items(entry, config))
    return CheckReport(check=check_id("T2"), items=tuple(items))


def _percent_items(table: DataTable, config: RepoConfig) -> list[CheckItem]:
    if "measure_type" not in table.columns:
        return []
    grouped: dict[str, list[str]] = {}
    for row in table.rows:
        if row.get("measure_type", "").strip().lower() != "percent":
            continue
        grouped.setdefault(row.get("measure", ""), []).append(row.get("value", ""))

    items: list[CheckItem] = []
    for measure in sorted(grouped):
        raw_values = [v for v in grouped[measure] if v is not None and v.strip() != ""]
        values: list[float] = []
        bad: str | None = None
        for raw in raw_values:
            try:
                values.append(float(raw))
            except ValueError:
                bad = raw
                break
        key = measure or None
        if bad is not None:
            items.append(
                CheckItem(
                    path=table.path,
                    key=key,
                    verdict="error",
                    detail=f"non-numeric value {bad!r} for percent measure",
                )
            )
            continue
        out_of_range = [v for v in values if v < 0 or v > 100]
        if out_of_range:
            items.append(
                CheckItem(
                    path=table.path,
                    key=key,
                    verdict="invalid",
                    detail=f"value {out_of_range[0]} outside the 0-100 percent range",
                )
            )
            continue
        if len(values) >= config.fraction_min_rows and all(0 <= v <= 1 for v in values):
            items.append(
                CheckItem(
                    path=table.path,
                    key=key,
                    verdict="invalid",
                    detail=(
                        f"suspected 0-1 fraction: all {len(values)} values fall within"
                        " [0, 1]; percents use the 0-100 scale"
                    ),
                )
            )
            continue
        items.append(CheckItem(path=table.path, key=key, verdict="valid"))
    return items


# ---------------------------------------------------------------- T3, T7


def check_info_structure(
    snapshot: RepoSnapshot, config: RepoConfig | None = None
) -> tuple[CheckReport, CheckReport]:
    """T3: entries use only allowable keys. T7: expected keys present and filled."""
    config = config or default_config()
    schema = config.schema
    t3_settings = config.check_settings("T3")
    t7_settings = config.check_settings("T7")
    allowed = set(schema.allowed_keys)
    t3_items: list[CheckItem] = []
    t7_items: list[CheckItem] = []

    for info in snapshot.measure_info_files:
        if isinstance(info, ParseFailure):
            detail = f"file could not be parsed: {info.message}"
            if t3_settings.applies_to(info.path):
                t3_items.append(CheckItem(path=info.path, verdict="error", detail=detail))
            if t7_settings.applies_to(info.path):
                t7_items.append(CheckItem(path=info.path, verdict="error", detail=detail))
            continue

        in_t3 = t3_settings.applies_to(info.path)
        in_t7 = t7_settings.applies_to(info.path)
        for measure_id, entry in info.entries.items():
            if in_t3:
                disallowed = sorted(k for k in entry.data if k not in allowed)
                if disallowed:
                    t3_items.append(
                        CheckItem(
                            path=info.path,
                            key=measure_id,
                            verdict="invalid",
                            detail=f"keys outside the allowable list: {', '.join(disallowed)}",
                        )
                    )
                else:
                    t3_items.append(CheckItem(path=info.path, key=measure_id, verdict="valid"))
            if in_t7:
                report = validate_entry_keys(entry, schema)
                problems = []
                if report.absent:
                    problems.append(f"absent: {', '.join(report.absent)}")
                if report.blank:
                    problems.append(f"blank: {', '.join(report.blank)}")
                if problems:
                    t7_items.append(
                        CheckItem(
                            path=info.path,
                            key=measure_id,
                            verdict="invalid",
                            detail="; ".join(problems),
                        )
                    )
                else:
                    t7_items.append(CheckItem(path=info.path, key=measure_id, verdict="valid"))

        if in_t3 and info.references is not None:
            # The bibliography block is reserved structure, not a measure entry.
            empty = sorted(r.ref_id for r in info.references.values() if not r.fields)
            if empty:
                t3_items.append(
                    CheckItem(
                        path=info.path,
                        key=REFERENCES_KEY,
                        verdict="invalid",
                        detail=f"references without any fields: {', '.join(empty)}",
                    )
                )
            else:
                t3_items.append(
                    CheckItem(path=info.path, key=REFERENCES_KEY, verdict="valid")
                )

    return (
        CheckReport(check=check_id("T3"), items=tuple(t3_items)),
        CheckReport(check=check_id("T7"), items=tuple(t7_items)),
    )


# ---------------------------------------------------------------- T5, T14


def cross_check_measures(
    snapshot: RepoSnapshot, config: RepoConfig | None = None
) -> tuple[CheckReport, CheckReport]:
    """T5: data-table measures all have metadata. T14: metadata names no stale measures."""
    config = config or default_config()
    t5_settings = config.check_settings("T5")
    t14_settings = config.check_settings("T14")
    pairing = _pair_tables(snapshot)

    expanded: dict[str, tuple[set[str], list[tuple[str, str]]]] = {}
    for info in snapshot.measure_info_files:
        if isinstance(info, MeasureInfoFile):
            expanded[info.path] = _expanded_ids(info)

    t5_items: list[CheckItem] = []
    for table in snapshot.data_tables:
        if isinstance(table, ParseFailure) or not t5_settings.applies_to(table.path):
            continue
        status, ref = pairing.table_status[table.path]
        if status == "none":
            t5_items.append(
                CheckItem(
                    path=table.path,
                    verdict="invalid",
                    detail="no measure_info file found in this or any parent directory",
                )
            )
            continue
        if status == "ambiguous":
            siblings = ", ".join(pairing.ambiguous_dirs[ref])
            t5_items.append(
                CheckItem(
                    path=table.path,
                    verdict="error",
                    detail=f"ambiguous pairing: multiple measure_info files claim this table ({siblings})",
                )
            )
            continue
        if status == "broken":
            t5_items.append(
                CheckItem(
                    path=table.path,
                    verdict="error",
                    detail=f"paired measure_info file could not be parsed: {ref}",
                )
            )
            continue
        known_ids = expanded[ref][0]
        for measure in sorted(table.distinct_measures):
            if measure in known_ids:
                t5_items.append(CheckItem(path=table.path, key=measure, verdict="valid"))
            else:
                t5_items.append(
                    CheckItem(
                        path=table.path,
                        key=measure,
                        verdict="missing",
                        detail=f"measure {measure!r} has no entry in {ref}",
                    )
                )

    tables_by_path = {t.path: t for t in snapshot.parsed_tables}
    t14_items: list[CheckItem] = []
    for info in snapshot.measure_info_files:
        if not t14_settings.applies_to(info.path):
            continue
        if isinstance(info, ParseFailure):
            t14_items.append(
                CheckItem(
                    path=info.path,
                    verdict="error",
                    detail=f"file could not be parsed: {info.message}",
                )
            )
            continue
        info_dir = _dir_of(info.path)
        if info_dir in pairing.ambiguous_dirs:
            siblings = ", ".join(pairing.ambiguous_dirs[info_dir])
            t14_items.append(
                CheckItem(
                    path=info.path,
                    verdict="error",
                    detail=f"ambiguous pairing: directory holds multiple measure_info files ({siblings})",
                )
            )
            continue
        ids, failures = expanded[info.path]
        for measure_id, message in failures:
            t14_items.append(
                CheckItem(
                    path=info.path,
                    key=measure_id,
                    verdict="error",
                    detail=f"dynamic entry could not be expanded: {message}",
                )
            )
        failed = {measure_id for measure_id, _ in failures}
        in_data: set[str] = set()
        for table_path in pairing.info_tables[info.path]:
            in_data.update(tables_by_path[table_path].distinct_measures)
        for measure_id in sorted(ids - failed):
            if measure_id in in_data:
                t14_items.append(CheckItem(path=info.path, key=measure_id, verdict="valid"))
            else:
                t14_items.append(
                    CheckItem(
                        path=info.path,
                        key=measure_id,
                        verdict="extra",
                        detail=f"measure {measure_id!r} appears in no corresponding data table",
                    )
                )

    return (
        CheckReport(check=check_id("T5"), items=tuple(t5_items)),
        CheckReport(check=check_id("T14"), items=tuple(t14_items)),
    )


# ---------------------------------------------------------------- T4, T6, T9, T10


def check_tabular_conventions(
    snapshot: RepoSnapshot, config: RepoConfig | None = None
) -> tuple[CheckReport, CheckReport, CheckReport, CheckReport]:
    """T4: measure types. T6: column names. T9: region types. T10: known measures."""
    config = config or default_config()
    schema = config.schema
    settings = {cid: config.check_settings(cid) for cid in ("T4", "T6", "T9", "T10")}
    items: dict[str, list[CheckItem]] = {cid: [] for cid in settings}

    measure_types = schema.vocabulary("measure_type")
    region_types = schema.vocabulary("region_type")
    required = set(config.required_columns)
    optional = set(config.optional_columns)

    for entry in snapshot.data_tables:
        if isinstance(entry, ParseFailure):
            for cid, setting in settings.items():
                if setting.applies_to(entry.path):
                    items[cid].append(
                        CheckItem(
                            path=entry.path,
                            verdict="error",
                            detail=f"table could not be parsed: {entry.message}",
                        )
                    )
            continue

        table = entry
        if settings["T4"].applies_to(table.path):
            for mtype in sorted(table.distinct_measure_types):
                if mtype in measure_types:
                    items["T4"].append(CheckItem(path=table.path, key=mtype, verdict="valid"))
                else:
                    items["T4"].append(
                        CheckItem(
                            path=table.path,
                            key=mtype,
                            verdict="invalid",
                            detail=f"measure_type {mtype!r} not in the configured vocabulary",
                        )
                    )

        if settings["T6"].applies_to(table.path):
            present = set(table.columns)
            absent = sorted(required - present)
            unexpected = sorted(present - required - optional)
            problems = []
            if absent:
                problems.append(f"missing columns: {', '.join(absent)}")
            if unexpected:
                problems.append(f"unexpected columns: {', '.join(unexpected)}")
            if problems:
                items["T6"].append(
                    CheckItem(path=table.path, verdict="invalid", detail="; ".join(problems))
                )
            else:
                items["T6"].append(CheckItem(path=table.path, verdict="valid"))

        if settings["T9"].applies_to(table.path) and "region_type" in table.columns:
            for rtype in sorted(table.distinct_region_types):
                if rtype in region_types:
                    items["T9"].append(CheckItem(path=table.path, key=rtype, verdict="valid"))
                else:
                    items["T9"].append(
                        CheckItem(
                            path=table.path,
                            key=rtype,
                            verdict="invalid",
                            detail=f"region_type {rtype!r} not in the configured vocabulary",
                        )
                    )

        if settings["T10"].applies_to(table.path):
            if config.known_measures is None:
                items["T10"].append(
                    CheckItem(
                        path=table.path,
                        verdict="skipped",
                        detail="no known-measures list configured",
                    )
                )
            else:
                for measure in sorted(table.distinct_measures):
                    if measure in config.known_measures:
                        items["T10"].append(
                            CheckItem(path=table.path, key=measure, verdict="valid")
                        )
                    else:
                        items["T10"].append(
                            CheckItem(
                                path=table.path,
                                key=measure,
                                verdict="invalid",
                                detail=f"measure {measure!r} not in the known-measures list",
                            )
                        )

    return tuple(CheckReport(check=check_id(cid), items=tuple(items[cid])) for cid in ("T4", "T6", "T9", "T10"))  # type: ignore[return-value]


# ---------------------------------------------------------------- T11, T12, T13


def check_file_conventions(
    snapshot: RepoSnapshot, config: RepoConfig | None = None
) -> tuple[CheckReport, CheckReport, CheckReport]:
    """T11: naming pattern + extension allowlist. T12: distribution code exists. T13: name length."""
    config = config or default_config()
    t11_settings = config.check_settings("T11")
    t12_settings = config.check_settings("T12")
    t13_settings = config.check_settings("T13")
    pattern = re.compile(config.naming_pattern)

    t11_items: list[CheckItem] = []
    t13_items: list[CheckItem] = []
    code_expectations: dict[str, str] = {}

    for cf in snapshot.files:
        name = cf.basename
        if t11_settings.applies_to(cf.path):
            problems = []
            if not pattern.fullmatch(name):
                problems.append(f"name does not match pattern {config.naming_pattern}")
            ext = name.rsplit(".", 1)[-1].lower() if "." in name else ""
            if ext not in config.allowed_extensions:
                shown = ext or "(none)"
                problems.append(f"extension {shown} not in the allowlist")
            if problems:
                t11_items.append(
                    CheckItem(path=cf.path, verdict="invalid", detail="; ".join(problems))
                )
            else:
                t11_items.append(CheckItem(path=cf.path, verdict="valid"))

        if t13_settings.applies_to(cf.path):
            if len(name) <= config.filename_limit:
                t13_items.append(CheckItem(path=cf.path, verdict="valid"))
            else:
                t13_items.append(
                    CheckItem(
                        path=cf.path,
                        verdict="invalid",
                        detail=(
                            f"file name is {len(name)} characters;"
                            f" limit is {config.filename_limit}"
                        ),
                    )
                )

        if (
            cf.in_distribution
            and cf.kind in ("tabular_data", "layer_data")
            and cf.sibling_code_dir is not None
        ):
            code_expectations.setdefault(_dir_of(cf.path), cf.sibling_code_dir)

    dirs_with_files = {_dir_of(cf.path) for cf in snapshot.files}
    t12_items: list[CheckItem] = []
    for data_dir in sorted(code_expectations):
        if not t12_settings.applies_to(data_dir):
            continue
        code_dir = code_expectations[data_dir]
        populated = any(d == code_dir or d.startswith(code_dir + "/") for d in dirs_with_files)
        if populated:
            t12_items.append(CheckItem(path=data_dir, verdict="valid"))
        else:
            t12_items.append(
                CheckItem(
                    path=data_dir,
                    verdict="invalid",
                    detail=f"distribution data present but {code_dir}/ is absent or empty",
                )
            )

    return (
        CheckReport(check=check_id("T11"), items=tuple(t11_items)),
        CheckReport(check=check_id("T12"), items=tuple(t12_items)),
        CheckReport(check=check_id("T13"), items=tuple(t13_items)),
    )


# ---------------------------------------------------------------- T8


def check_json_valid(snapshot: RepoSnapshot, config: RepoConfig | None = None) -> CheckReport:
    """T8: every JSON-bearing file parses as JSON."""
    config = config or default_config()
    settings = config.check_settings("T8")
    items: list[CheckItem] = []
    for path in sorted(snapshot.json_syntax):
        if not settings.applies_to(path):
            continue
        message = snapshot.json_syntax[path]
        if message is None:
            items.append(CheckItem(path=path, verdict="valid"))
        else:
            items.append(CheckItem(path=path, verdict="invalid", detail=message))
    return CheckReport(check=check_id("T8"), items=tuple(items))


# ---------------------------------------------------------------- suite


def run_suite(
    snapshot: RepoSnapshot,
    config: RepoConfig | None = None,
    selected: set[str] | None = None,
    *,
    dev: bool = False,
    strict: bool = False,
) -> SuiteReport:
    """Run the selected checks (default: all) and aggregate the suite verdict.

    ``dev`` downgrades every enforced check to a warning, for development
    repositories that want reports without gating; ``strict`` upgrades
    warnings to enforced. Checks configured ``off`` stay off either way.
    """
    config = config or default_config()
    if selected is not None:
        unknown = sorted(set(selected) - set(CHECK_NAMES))
        if unknown:
            raise ConfigError(
                f"unknown check id(s) selected: {', '.join(unknown)}"
                f" (known: {', '.join(CHECK_ORDER)})"
            )
        wanted = set(selected)
    else:
        wanted = set(CHECK_NAMES)

    produced: dict[str, CheckReport] = {}
    if "T2" in wanted:
        produced["T2"] = check_percent_range(snapshot, config)
    if wanted & {"T3", "T7"}:
        produced["T3"], produced["T7"] = check_info_structure(snapshot, config)
    if wanted & {"T5", "T14"}:
        produced["T5"], produced["T14"] = cross_check_measures(snapshot, config)
    if wanted & {"T4", "T6", "T9", "T10"}:
        (
            produced["T4"],
            produced["T6"],
            produced["T9"],
            produced["T10"],
        ) = check_tabular_conventions(snapshot, config)
    if wanted & {"T11", "T12", "T13"}:
        (
            produced["T11"],
            produced["T12"],
            produced["T13"],
        ) = check_file_conventions(snapshot, config)
    if "T8" in wanted:
        produced["T8"] = check_json_valid(snapshot, config)

    reports = tuple(produced[cid] for cid in CHECK_ORDER if cid in wanted)
    enforcement = {}
    for cid in CHECK_ORDER:
        if cid not in wanted:
            continue
        tier = config.enforcement(cid)
        if dev and tier == "enforced":
            tier = "warn"
        elif strict and tier == "warn":
            tier = "enforced"
        enforcement[cid] = tier
    overall = all(
        report.passed
        for report in reports
        if enforcement[report.check.id] == "enforced"
    )
    return SuiteReport(
        root=snapshot.root,
        reports=reports,
        enforcement=enforcement,
        overall_pass=overall,
    )
