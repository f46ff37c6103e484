"""Final QI selection: grade-derived thresholds over re-identifiability scores.

A requestor grade maps to a threshold (High 0.25, Middle 0.5, Low
0.75); every secondary QI whose score reaches the threshold
(inclusive) lands in the final QI set. Lower grades mean higher
thresholds and therefore fewer selected columns. DID columns never
participate: they are always slated for removal. SA columns are
flagged for deletion unless research-relevant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

from .assessment import RequestorScore, UserGrade
from .classifier import ClassifiedTable, ColumnClass
from .metrics import RiskScore, fmt4, secondary_qis

_GRADE_THRESHOLDS = {
    UserGrade.HIGH: 0.25,
    UserGrade.MIDDLE: 0.5,
    UserGrade.LOW: 0.75,
}

_SA_NOTE = "delete unless research-relevant"
_DID_NOTE = "mandatory removal"


@dataclass(frozen=True)
class SelectionThreshold:
    """Effective threshold, plus the grade-derived value when overridden."""

    value: float
    grade_value: float | None = None
    overridden: bool = False

    def __post_init__(self):
        if not 0 <= self.value <= 2:
            raise ValueError(f"threshold must be in [0, 2], got {self.value}")


def threshold_for(grade: UserGrade) -> SelectionThreshold:
    """High -> 0.25, Middle -> 0.5, Low -> 0.75."""
    value = _GRADE_THRESHOLDS[UserGrade(grade)]
    return SelectionThreshold(value=value, grade_value=value)


def manual_threshold(value: float, grade: UserGrade | None = None) -> SelectionThreshold:
    """An explicit override; keeps the grade-derived value on record."""
    grade_value = _GRADE_THRESHOLDS[UserGrade(grade)] if grade is not None else None
    return SelectionThreshold(value=value, grade_value=grade_value, overridden=True)


def select_final_qis(
    scores: Sequence[RiskScore], threshold: SelectionThreshold | float
) -> set[str]:
    """Columns whose unrounded score reaches the threshold (inclusive)."""
    cut = threshold.value if isinstance(threshold, SelectionThreshold) else threshold
    return {s.column for s in scores if s.sum >= cut}


@dataclass(frozen=True)
class ReportEntry:
    """One column's evidence row."""

    column: str
    column_class: ColumnClass
    uniqueness: float | None = None
    influence: float | None = None
    sum: float | None = None
    secondary: bool = False
    selected: bool = False
    mandatory_removal: bool = False
    note: str = ""


@dataclass(frozen=True)
class SelectionReport:
    table_name: str
    grade: UserGrade
    threshold: SelectionThreshold
    entries: tuple[ReportEntry, ...]
    final_qis: frozenset[str]
    generated_at: str | None


def build_report(
    classified: ClassifiedTable,
    scores: Sequence[RiskScore],
    requestor: RequestorScore,
    threshold_override: float | None = None,
    timestamp: bool = True,
) -> SelectionReport:
    """Assemble the per-column evidence trail and the final QI set.

    ``scores`` must come from scoring ``classified`` (one entry per
    primary QI). Selection applies only to secondary QIs, so a zero
    override threshold still cannot select a zero-scored column.
    """
    if threshold_override is not None:
        threshold = manual_threshold(threshold_override, grade=requestor.grade)
    else:
        threshold = threshold_for(requestor.grade)

    by_column = {s.column: s for s in scores}
    secondary = secondary_qis(scores)
    entries = []
    for meta in classified.table.columns:
        cls = classified.classes[meta.name]
        score = by_column.get(meta.name)
        if cls is ColumnClass.QI and score is not None:
            is_secondary = meta.name in secondary
            entries.append(
                ReportEntry(
                    column=meta.name,
                    column_class=cls,
                    uniqueness=score.uniqueness,
                    influence=score.influence,
                    sum=score.sum,
                    secondary=is_secondary,
                    selected=is_secondary and score.sum >= threshold.value,
                )
            )
        else:
            entries.append(
                ReportEntry(
                    column=meta.name,
                    column_class=cls,
                    mandatory_removal=cls is ColumnClass.DID,
                    note=_DID_NOTE if cls is ColumnClass.DID
                    else _SA_NOTE if cls is ColumnClass.SA
                    else "",
                )
            )

    generated_at = (
        datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
    )
    return SelectionReport(
        table_name=classified.table.name,
        grade=requestor.grade,
        threshold=threshold,
        entries=tuple(entries),
        final_qis=frozenset(e.column for e in entries if e.selected),
        generated_at=generated_at,
    )


# -- rendering ----------------------------------------------------------

def report_to_dict(report: SelectionReport) -> dict:
    doc = {
        "table": report.table_name,
        "grade": report.grade.value,
        "threshold": report.threshold.value,
        "grade_threshold": report.threshold.grade_value,
        "threshold_overridden": report.threshold.overridden,
        "final_qis": sorted(report.final_qis),
        "entries": [
            {
                "column": e.column,
                "class": e.column_class.value,
                "uniqueness": None if e.uniqueness is None else round(e.uniqueness, 4),
                "influence": None if e.influence is None else round(e.influence, 4),
                "sum": None if e.sum is None else round(e.sum, 4),
                "secondary": e.secondary,
                "selected": e.selected,
                "mandatory_removal": e.mandatory_removal,
                "note": e.note,
            }
            for e in report.entries
        ],
    }
    if report.generated_at is not None:
        doc["generated_at"] = report.generated_at
    return doc


def report_to_json(report: SelectionReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_to_tsv(report: SelectionReport) -> str:
    lines = ["table\tcolumn\tclass\tuniqueness\tinfluence\tsum\tsecondary\tselected\tnote"]
    for e in report.entries:
        lines.append(
            "\t".join(
                [
                    report.table_name,
                    e.column,
                    e.column_class.value,
                    "" if e.uniqueness is None else fmt4(e.uniqueness),
                    "" if e.influence is None else fmt4(e.influence),
                    "" if e.sum is None else fmt4(e.sum),
                    "yes" if e.secondary else "no",
                    "yes" if e.selected else "no",
                    e.note,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def report_to_text(report: SelectionReport) -> str:
    """Aligned, human-readable rendering of the evidence table."""
    header = [
        f"table: {report.table_name}",
        f"requestor grade: {report.grade}",
        f"threshold: {fmt4(report.threshold.value)}"
        + (
            f" (manual override; grade-derived {fmt4(report.threshold.grade_value)})"
            if report.threshold.overridden and report.threshold.grade_value is not None
            else " (manual override)" if report.threshold.overridden else ""
        ),
    ]
    if report.generated_at is not None:
        header.append(f"generated at: {report.generated_at}")

    columns = ["column", "class", "uniqueness", "influence", "sum", "selected", "note"]
    rows = []
    for e in report.entries:
        rows.append(
            [
                e.column,
                e.column_class.value,
                "" if e.uniqueness is None else fmt4(e.uniqueness),
                "" if e.influence is None else fmt4(e.influence),
                "" if e.sum is None else fmt4(e.sum),
                "yes" if e.selected else "no",
                e.note,
            ]
        )
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c) for i, c in enumerate(columns)]
    lines = header + [""]
    lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    lines.append("")
    lines.append(
        "final QIs: " + (", ".join(sorted(report.final_qis)) if report.final_qis else "(none)")
    )
    return "\n".join(lines) + "\n"
