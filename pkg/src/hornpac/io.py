"""Dataset ingestion, nominal scaling, and serialization of artifacts.

Supported inputs are Burmeister formal contexts (``.cxt``) and CSV
tables with a header row, scaled column by column: boolean columns pass
through, many-valued columns expand nominally into one binary attribute
per observed value (labelled ``column=value`` in first-appearance
order).  All parsers reject trailing garbage and report 1-based
positions.

Formulas and reports serialize to line-oriented JSON records with fixed
field order, so equal runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import io as _stdio
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import (
    BOTTOM,
    AssignmentFamily,
    AttributeSet,
    HornFormula,
    Implication,
    Universe,
)
from .evaluate import ExperimentReport, RunRecord
from .learner import LearnerConfig, RunReport

AS_IS = "as_is"
NOMINAL = "nominal"
DROP = "drop"

_DIRECTIVES = (AS_IS, NOMINAL, DROP)
_TRUE_TOKENS = {"1", "true", "X"}
_FALSE_TOKENS = {"0", "false", "."}


class ParseError(ValueError):
    """Malformed input, with a 1-based line (and column when known)."""

    def __init__(self, message: str, line: int, column: int | None = None):
        at = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{at}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ScalingSpec:
    """Per-column scaling directives, plus an optional object-label column."""

    columns: dict[str, str]
    label_column: str | None = None

    def __post_init__(self):
        for column, directive in self.columns.items():
            if directive not in _DIRECTIVES:
                raise ValueError(
                    f"column {column!r}: unknown directive {directive!r}; "
                    f"expected one of {_DIRECTIVES}"
                )


@dataclass
class ContextDocument:
    """A parsed dataset: universe, rows, object labels and provenance."""

    universe: Universe
    family: AssignmentFamily
    objects: tuple[str, ...]
    provenance: dict = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ContextDocument)
            and self.universe == other.universe
            and self.family.rows == other.family.rows
            and self.objects == other.objects
        )


# ---------------------------------------------------------------------------
# Burmeister formal contexts


def parse_burmeister(text: str, source: str = "<string>") -> ContextDocument:
    """Parse a Burmeister ``.cxt`` context.

    Layout: a ``B`` line, an optional title line, object and attribute
    counts, object names, attribute names, then one ``X``/``.`` row per
    object.
    """
    lines = text.splitlines()
    pos = 0

    def take(what: str) -> str:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"unexpected end of input, expected {what}", len(lines) + 1)
        line = lines[pos]
        pos += 1
        return line

    header = take("header 'B'")
    if header.strip() != "B":
        raise ParseError(f"expected header 'B', found {header!r}", pos)

    def is_count(s: str) -> bool:
        return s.strip().isdigit()

    # An optional title line sits between the header and the two counts.
    if pos + 1 < len(lines) and is_count(lines[pos]) and is_count(lines[pos + 1]):
        title = ""
    else:
        title = take("title or object count")

    count_line = take("object count")
    if not is_count(count_line):
        raise ParseError(f"expected object count, found {count_line!r}", pos)
    n_objects = int(count_line)
    count_line = take("attribute count")
    if not is_count(count_line):
        raise ParseError(f"expected attribute count, found {count_line!r}", pos)
    n_attributes = int(count_line)

    objects = [take(f"object name {k + 1}") for k in range(n_objects)]
    attributes = [take(f"attribute name {k + 1}") for k in range(n_attributes)]
    try:
        universe = Universe(attributes)
    except ValueError as exc:
        raise ParseError(str(exc), pos) from None

    rows = []
    for k in range(n_objects):
        line = take(f"incidence row {k + 1}")
        row_line = pos
        if len(line) != n_attributes:
            raise ParseError(
                f"incidence row has {len(line)} characters, expected {n_attributes}",
                row_line,
            )
        bits = 0
        for col, ch in enumerate(line):
            if ch == "X":
                bits |= 1 << col
            elif ch != ".":
                raise ParseError(f"illegal incidence character {ch!r}", row_line, col + 1)
        rows.append(AttributeSet(universe, bits))

    while pos < len(lines):
        if lines[pos].strip():
            raise ParseError(f"trailing garbage {lines[pos]!r}", pos + 1)
        pos += 1

    family = AssignmentFamily(universe, rows, labels=objects)
    return ContextDocument(
        universe, family, tuple(objects), {"source": source, "title": title}
    )


def write_burmeister(doc: ContextDocument) -> str:
    """Render a context in Burmeister form; inverse of :func:`parse_burmeister`."""
    out = ["B", str(doc.provenance.get("title", ""))]
    out.append(str(len(doc.objects)))
    out.append(str(len(doc.universe)))
    out.extend(doc.objects)
    out.extend(doc.universe.names)
    full = len(doc.universe)
    for row in doc.family.rows:
        out.append("".join("X" if row.bits >> i & 1 else "." for i in range(full)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# CSV ingestion with nominal scaling


def parse_csv_scaled(
    text: str, spec: ScalingSpec, source: str = "<string>", dedup: bool = False
) -> ContextDocument:
    """Scale a CSV table with a header row into a binary context.

    Nominal columns expand to one attribute per observed value, labelled
    ``column=value`` in first-appearance order; as-is columns accept
    only ``0/1/true/false/X/.``.  Duplicate rows are kept unless
    ``dedup`` is set.
    """
    reader = csv.reader(_stdio.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, expected a header row", 1) from None
    header = [h.strip() for h in header]
    seen = set()
    for name in header:
        if name in seen:
            raise ParseError(f"duplicate column {name!r} in header", 1)
        seen.add(name)

    for column in spec.columns:
        if column not in seen:
            raise ParseError(f"directive for unknown column {column!r}", 1)
    if spec.label_column is not None and spec.label_column not in seen:
        raise ParseError(f"label column {spec.label_column!r} not in header", 1)
    for name in header:
        if name == spec.label_column:
            continue
        if name not in spec.columns:
            raise ParseError(f"column {name!r} has no scaling directive", 1)

    records = []
    for line_no, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise ParseError(
                f"row has {len(row)} fields, expected {len(header)}", line_no
            )
        records.append((line_no, [cell.strip() for cell in row]))
    if not records:
        raise ParseError("no data rows", 2)

    # First pass: collect nominal values in first-appearance order.
    nominal_values: dict[str, list[str]] = {
        c: [] for c in header if spec.columns.get(c) == NOMINAL
    }
    for _, row in records:
        for col_idx, name in enumerate(header):
            if spec.columns.get(name) == NOMINAL:
                value = row[col_idx]
                if value not in nominal_values[name]:
                    nominal_values[name].append(value)

    names: list[str] = []
    for name in header:
        directive = spec.columns.get(name) if name != spec.label_column else DROP
        if name == spec.label_column or directive == DROP:
            continue
        if directive == AS_IS:
            names.append(name)
        else:
            names.extend(f"{name}={value}" for value in nominal_values[name])
    universe = Universe(names)

    label_idx = header.index(spec.label_column) if spec.label_column is not None else None
    rows: list[AttributeSet] = []
    labels: list[str] = []
    seen_bits: set[int] = set()
    for line_no, row in records:
        bits = 0
        position = 0
        for col_idx, name in enumerate(header):
            directive = spec.columns.get(name) if name != spec.label_column else DROP
            if name == spec.label_column or directive == DROP:
                continue
            value = row[col_idx]
            if directive == AS_IS:
                if value in _TRUE_TOKENS:
                    bits |= 1 << position
                elif value not in _FALSE_TOKENS:
                    raise ParseError(
                        f"column {name!r}: non-binary value {value!r}", line_no, col_idx + 1
                    )
                position += 1
            else:
                offset = nominal_values[name].index(value)
                bits |= 1 << (position + offset)
                position += len(nominal_values[name])
        if dedup and bits in seen_bits:
            continue
        seen_bits.add(bits)
        rows.append(AttributeSet(universe, bits))
        labels.append(row[label_idx] if label_idx is not None else f"row{line_no - 1}")

    family = AssignmentFamily(universe, rows, labels=labels)
    return ContextDocument(
        universe,
        family,
        tuple(labels),
        {"source": source, "scaling": dataclasses.asdict(spec)},
    )


def load_scaling_spec(path: str | Path) -> ScalingSpec:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return ScalingSpec(columns=dict(data["columns"]), label_column=data.get("label_column"))


def save_scaling_spec(spec: ScalingSpec, path: str | Path) -> None:
    payload = {"label_column": spec.label_column, "columns": spec.columns}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Formula records


def _implication_record(imp: Implication) -> dict:
    conclusion = (
        "bottom" if imp.conclusion is BOTTOM else list(imp.conclusion.labels())
    )
    return {"premise": list(imp.premise.labels()), "conclusion": conclusion}


def serialize_formula(h: HornFormula) -> str:
    """One JSON record per implication, in formula order."""
    return "".join(
        json.dumps(_implication_record(imp), ensure_ascii=False) + "\n" for imp in h
    )


def _labels_to_set(universe: Universe, labels: list, line_no: int, side: str) -> AttributeSet:
    bits = 0
    for label in labels:
        try:
            position = universe.index(label)
        except ValueError:
            raise ParseError(f"unknown label {label!r} in {side}", line_no) from None
        bit = 1 << position
        if bits & bit:
            raise ParseError(f"duplicate label {label!r} in {side}", line_no)
        bits |= bit
    return AttributeSet(universe, bits)


def parse_formula(text: str, universe: Universe) -> HornFormula:
    """Inverse of :func:`serialize_formula` over a known universe."""
    implications = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON record: {exc.msg}", line_no) from None
        if not isinstance(record, dict) or "premise" not in record or "conclusion" not in record:
            raise ParseError("record must carry 'premise' and 'conclusion'", line_no)
        premise = _labels_to_set(universe, record["premise"], line_no, "premise")
        raw = record["conclusion"]
        if raw == "bottom":
            implications.append(Implication(premise, BOTTOM))
        elif isinstance(raw, list):
            implications.append(
                Implication(premise, _labels_to_set(universe, raw, line_no, "conclusion"))
            )
        else:
            raise ParseError(f"conclusion must be a label list or 'bottom', got {raw!r}", line_no)
    return HornFormula(universe, implications)


# ---------------------------------------------------------------------------
# Reports and configs


def report_to_dict(report: RunReport, include_timing: bool = False) -> dict:
    payload = dataclasses.asdict(report)
    if not include_timing:
        payload.pop("wall_time")
    return payload


def report_to_json(report: RunReport, include_timing: bool = False) -> str:
    return json.dumps(report_to_dict(report, include_timing), indent=2) + "\n"


def record_to_dict(record: RunRecord, include_timing: bool = False) -> dict:
    payload = dataclasses.asdict(record)
    if not include_timing:
        payload.pop("wall_time")
    return payload


def experiment_to_jsonl(report: ExperimentReport, include_timing: bool = False) -> str:
    lines = [
        json.dumps(
            {"master_seed": report.master_seed, "eval_samples": report.eval_samples}
        )
    ]
    lines.extend(
        json.dumps(record_to_dict(record, include_timing)) for record in report.records
    )
    return "\n".join(lines) + "\n"


def summary_table(report: ExperimentReport) -> str:
    """Human-readable per-cell aggregates (SR recall, DP valid fraction, BS size)."""
    rows = [
        f"{'epsilon':>9} {'delta':>7} {'runs':>5} "
        f"{'BS':>12} {'DP':>12} {'precision':>12} {'SR':>12} {'queries':>12}"
    ]
    for cell in report.summarize():
        rows.append(
            f"{cell.epsilon:>9g} {cell.delta:>7g} {cell.runs:>5d} "
            f"{cell.basis_size_mean:>6.1f}±{cell.basis_size_std:<5.1f} "
            f"{cell.fraction_valid_mean:>6.2f}±{cell.fraction_valid_std:<5.2f} "
            f"{cell.precision_mean:>6.2f}±{cell.precision_std:<5.2f} "
            f"{cell.recall_mean:>6.2f}±{cell.recall_std:<5.2f} "
            f"{cell.queries_mean:>12.0f}"
        )
    failures = sum(1 for r in report.records if r.error is not None)
    if failures:
        rows.append(f"({failures} failed runs excluded)")
    return "\n".join(rows) + "\n"


def load_learner_config(path: str | Path) -> LearnerConfig:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return LearnerConfig(**data)


# ---------------------------------------------------------------------------
# Packaged datasets


def packaged_dataset_path(name: str) -> Path:
    base = resources.files("hornpac") / "data"
    path = Path(str(base / f"{name}.csv"))
    if not path.exists():
        raise FileNotFoundError(f"no packaged dataset named {name!r}")
    return path


def packaged_scaling_path(name: str) -> Path:
    base = resources.files("hornpac") / "data"
    path = Path(str(base / f"{name}_scaling.json"))
    if not path.exists():
        raise FileNotFoundError(f"no packaged scaling spec named {name!r}")
    return path


def load_context(
    data_path: str | Path, scaling_path: str | Path | None = None, dedup: bool = False
) -> ContextDocument:
    """Load a dataset by extension: ``.cxt`` Burmeister or ``.csv`` with a scaling spec."""
    data_path = Path(data_path)
    text = data_path.read_text(encoding="utf-8")
    if data_path.suffix.lower() == ".cxt":
        return parse_burmeister(text, source=str(data_path))
    if data_path.suffix.lower() == ".csv":
        if scaling_path is None:
            raise ValueError(f"CSV input {data_path} needs a scaling spec")
        spec = load_scaling_spec(scaling_path)
        return parse_csv_scaled(text, spec, source=str(data_path), dedup=dedup)
    raise ValueError(f"unsupported dataset extension {data_path.suffix!r}")
