"""Evaluation reports: records, aggregates, rendering, cross-report tables."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .model import EditType, EvalOutcome, SubjectScores

EDIT_TYPE_ORDER = tuple(e.value for e in EditType)

SUBJECT_FIELDS = ("sift", "aligned_iou", "ssim", "color_similarity", "position")


@dataclass
class ReportRecord:
    """One evaluated edit: outcome plus the metadata aggregation needs."""

    edit_id: str
    image_id: str
    edit_type: str
    edit_specific: float
    evaluation_success: bool
    subject: SubjectScores | None = None
    background: float | None = None
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_outcome(cls, outcome: EvalOutcome, image_id: str, edit_type: EditType):
        return cls(
            edit_id=outcome.edit_id,
            image_id=image_id,
            edit_type=edit_type.value,
            edit_specific=outcome.edit_specific,
            evaluation_success=outcome.evaluation_success,
            subject=outcome.subject,
            background=outcome.background,
            notes=list(outcome.notes),
        )

    def to_dict(self) -> dict:
        return {
            "edit_id": self.edit_id,
            "image_id": self.image_id,
            "edit_type": self.edit_type,
            "edit_specific": self.edit_specific,
            "evaluation_success": self.evaluation_success,
            "subject": self.subject.to_dict() if self.subject else None,
            "background": self.background,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReportRecord":
        subject = data.get("subject")
        return cls(
            edit_id=data["edit_id"],
            image_id=data["image_id"],
            edit_type=data["edit_type"],
            edit_specific=data["edit_specific"],
            evaluation_success=data["evaluation_success"],
            subject=SubjectScores.from_dict(subject) if subject else None,
            background=data.get("background"),
            notes=list(data.get("notes", [])),
        )


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _group_aggregate(records: list[ReportRecord]) -> dict:
    """Means over successfully evaluated records of one group."""
    ok = [r for r in records if r.evaluation_success]
    subject_means = {}
    for name in SUBJECT_FIELDS:
        values = [
            getattr(r.subject, name)
            for r in ok
            if r.subject is not None and getattr(r.subject, name) is not None
        ]
        subject_means[name] = _mean(values)
    return {
        "count": len(records),
        "evaluated": len(ok),
        "failed": len(records) - len(ok),
        "edit_specific": _mean([r.edit_specific for r in ok]),
        "subject": subject_means,
        "background": _mean([r.background for r in ok if r.background is not None]),
    }


def compute_aggregates(records: list[ReportRecord]) -> dict:
    """Per-edit-type and overall aggregates; failures are excluded from means."""
    per_type = {}
    for edit_type in EDIT_TYPE_ORDER:
        group = [r for r in records if r.edit_type == edit_type]
        if group:
            per_type[edit_type] = _group_aggregate(group)
    return {"per_edit_type": per_type, "overall": _group_aggregate(records)}


@dataclass
class EvaluationReport:
    model: str
    config: dict = field(default_factory=dict)
    records: list[ReportRecord] = field(default_factory=list)

    @property
    def aggregates(self) -> dict:
        return compute_aggregates(self.records)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "config": dict(self.config),
            "records": [r.to_dict() for r in sorted(self.records, key=lambda r: r.edit_id)],
            "aggregates": self.aggregates,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvaluationReport":
        return cls(
            model=data.get("model", "model"),
            config=dict(data.get("config", {})),
            records=[ReportRecord.from_dict(r) for r in data.get("records", [])],
        )


def _format_cell(value: float | None) -> str:
    return f"{value:.4f}" if value is not None else "-"


def render_json(report: EvaluationReport) -> bytes:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True).encode("utf-8")


def render_markdown(report: EvaluationReport) -> bytes:
    aggregates = report.aggregates
    header = (
        "| Edit Type | Count | Edit-Specific | SIFT | Aligned IoU | SSIM "
        "| Color | Position | Background | Failed |"
    )
    separator = "|" + " --- |" * 10
    lines = [f"# Evaluation report: {report.model}", "", header, separator]
    for edit_type in EDIT_TYPE_ORDER:
        group = aggregates["per_edit_type"].get(edit_type)
        if group is None:
            row = [edit_type, "0"] + ["-"] * 7 + ["0"]
        else:
            subject = group["subject"]
            row = [
                edit_type,
                str(group["count"]),
                _format_cell(group["edit_specific"]),
                _format_cell(subject["sift"]),
                _format_cell(subject["aligned_iou"]),
                _format_cell(subject["ssim"]),
                _format_cell(subject["color_similarity"]),
                _format_cell(subject["position"]),
                _format_cell(group["background"]),
                str(group["failed"]),
            ]
        lines.append("| " + " | ".join(row) + " |")
    overall = aggregates["overall"]
    lines += [
        "",
        f"Overall edit-specific mean: {_format_cell(overall['edit_specific'])} "
        f"({overall['evaluated']}/{overall['count']} evaluated)",
        "",
    ]
    return "\n".join(lines).encode("utf-8")


def render_csv(report: EvaluationReport) -> bytes:
    buffer = io.StringIO(newline="")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        [
            "edit_id",
            "image_id",
            "edit_type",
            "edit_specific",
            "evaluation_success",
            "sift",
            "aligned_iou",
            "ssim",
            "color_similarity",
            "position",
            "background",
            "notes",
        ]
    )
    for record in sorted(report.records, key=lambda r: r.edit_id):
        subject = record.subject
        writer.writerow(
            [
                record.edit_id,
                record.image_id,
                record.edit_type,
                record.edit_specific,
                record.evaluation_success,
                getattr(subject, "sift", None),
                getattr(subject, "aligned_iou", None),
                getattr(subject, "ssim", None),
                getattr(subject, "color_similarity", None),
                getattr(subject, "position", None),
                record.background,
                "; ".join(record.notes),
            ]
        )
    return buffer.getvalue().encode("utf-8")


RENDERERS = {"json": render_json, "markdown": render_markdown, "csv": render_csv}


def render(report: EvaluationReport, format: str) -> bytes:
    try:
        renderer = RENDERERS[format]
    except KeyError:
        raise ValueError(f"unknown format {format!r}") from None
    return renderer(report)


def aggregate(reports: list[EvaluationReport], group_by: str = "edit_type") -> dict:
    """Cross-report table: groups as rows, models as columns, plus averages.

    Only successfully evaluated records contribute. Groups with no
    evaluated record are omitted with a note.
    """
    if group_by not in ("edit_type", "model"):
        raise ValueError("group_by must be 'edit_type' or 'model'")
    models = [r.model for r in reports]
    if len(set(models)) != len(models):
        models = [f"{model}#{i}" for i, model in enumerate(models)]

    cells: dict[str, dict[str, list[float]]] = {}
    for model, report in zip(models, reports):
        for record in report.records:
            if not record.evaluation_success:
                continue
            key = record.edit_type if group_by == "edit_type" else model
            column = model if group_by == "edit_type" else record.edit_type
            cells.setdefault(key, {}).setdefault(column, []).append(record.edit_specific)

    columns = models if group_by == "edit_type" else list(EDIT_TYPE_ORDER)
    row_order = EDIT_TYPE_ORDER if group_by == "edit_type" else models
    rows = []
    notes = []
    for key in row_order:
        row_cells = cells.get(key)
        if group_by == "edit_type" and key not in cells:
            if any(r.edit_type == key for report in reports for r in report.records):
                notes.append(f"group {key!r} omitted: no successfully evaluated records")
            continue
        if row_cells is None:
            notes.append(f"group {key!r} omitted: no successfully evaluated records")
            continue
        values = {column: _mean(row_cells.get(column, [])) for column in columns}
        present = [v for v in values.values() if v is not None]
        rows.append({"group": key, "values": values, "average": _mean(present)})

    column_averages = {}
    for column in columns:
        present = [row["values"][column] for row in rows if row["values"][column] is not None]
        column_averages[column] = _mean(present)
    overall = _mean([v for row in rows for v in row["values"].values() if v is not None])
    return {
        "group_by": group_by,
        "columns": columns,
        "rows": rows,
        "column_averages": column_averages,
        "overall": overall,
        "notes": notes,
    }


def render_aggregate_markdown(table: dict) -> bytes:
    columns = table["columns"]
    lines = [
        "| " + " | ".join([table["group_by"]] + columns + ["Avg."]) + " |",
        "|" + " --- |" * (len(columns) + 2),
    ]
    for row in table["rows"]:
        cells = [_format_cell(row["values"][c]) for c in columns]
        lines.append(
            "| " + " | ".join([row["group"]] + cells + [_format_cell(row["average"])]) + " |"
        )
    avg_cells = [_format_cell(table["column_averages"][c]) for c in columns]
    lines.append(
        "| Avg. | " + " | ".join(avg_cells) + f" | {_format_cell(table['overall'])} |"
    )
    return "\n".join(lines + [""]).encode("utf-8")


def render_aggregate(table: dict, format: str) -> bytes:
    if format == "markdown":
        return render_aggregate_markdown(table)
    if format == "json":
        return json.dumps(table, indent=2, sort_keys=True).encode("utf-8")
    if format == "csv":
        buffer = io.StringIO(newline="")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([table["group_by"]] + table["columns"] + ["average"])
        for row in table["rows"]:
            writer.writerow(
                [row["group"]]
                + [row["values"][c] for c in table["columns"]]
                + [row["average"]]
            )
        return buffer.getvalue().encode("utf-8")
    raise ValueError(f"unknown format {format!r}")
