"""Immutable columnar tables over canonicalized text cells.

A table is a named, ordered collection of columns; every cell is either
a canonical string (no leading/trailing ASCII whitespace) or missing.
Missing is modeled as ``None`` and all missing cells in a column compare
equal for grouping purposes, i.e. they form one shared symbol.

Cell comparison everywhere downstream is exact, case-sensitive string
equality: ``"72"`` and ``"72.0"`` are different symbols on purpose.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import IO, TYPE_CHECKING, Iterable, Mapping, Sequence

from .errors import IngestError, NoSuchColumn

if TYPE_CHECKING:  # pragma: no cover
    from .classifier import ColumnClass

# A cell is a canonical string, or None for missing.
CellValue = str | None

# str.strip() would also eat unicode whitespace; canonicalization is
# deliberately limited to the ASCII set.
_ASCII_WS = " \t\r\n\x0b\x0c"


def canonicalize(raw: str) -> CellValue:
    """Trim ASCII whitespace; an empty result is missing.

    Idempotent: canonicalize(canonicalize(x)) == canonicalize(x).
    """
    trimmed = raw.strip(_ASCII_WS)
    return trimmed if trimmed else None


@dataclass(frozen=True)
class IngestOptions:
    """Parsing options for delimited text."""

    delimiter: str = ","
    has_header: bool = True
    table_name: str = "table"
    na_token: str = "NA"


@dataclass(frozen=True)
class ColumnMeta:
    """Name, position, and optional manual class override for one column."""

    name: str
    position: int
    declared_class: "ColumnClass | None" = None


@dataclass(frozen=True)
class Table:
    """Column-major table of canonical cells.

    Instances are immutable after construction and safe to share across
    threads. Constructors are expected to hand over canonical cells; use
    :meth:`from_rows` / :meth:`from_columns` (or :func:`ingest_delimited`)
    rather than calling the dataclass directly with raw strings.
    """

    name: str
    columns: tuple[ColumnMeta, ...]
    cells: tuple[tuple[CellValue, ...], ...]
    row_count: int
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.cells) != len(self.columns):
            raise ValueError(
                f"{len(self.columns)} columns but {len(self.cells)} cell sequences"
            )
        index: dict[str, int] = {}
        for pos, meta in enumerate(self.columns):
            if meta.position != pos:
                raise ValueError(
                    f"column {meta.name!r} has position {meta.position}, expected {pos}"
                )
            key = meta.name.lower()
            if key in index:
                raise ValueError(f"duplicate column name {meta.name!r}")
            index[key] = pos
        for meta, col in zip(self.columns, self.cells):
            if len(col) != self.row_count:
                raise ValueError(
                    f"column {meta.name!r} has {len(col)} cells, expected {self.row_count}"
                )
        object.__setattr__(self, "_index", index)

    # -- construction -------------------------------------------------

    @classmethod
    def from_columns(
        cls,
        name: str,
        columns: Mapping[str, Iterable[CellValue]] | Sequence[tuple[str, Iterable[CellValue]]],
        declared_classes: Mapping[str, "ColumnClass"] | None = None,
        canonical: bool = False,
    ) -> "Table":
        """Build a table from (column name, cells) pairs.

        Cells are canonicalized unless ``canonical=True`` promises they
        already are (bulk producers such as the synthetic generator).
        """
        pairs = list(columns.items()) if isinstance(columns, Mapping) else list(columns)
        declared = {k.lower(): v for k, v in (declared_classes or {}).items()}
        metas = []
        data = []
        row_count = 0
        for pos, (col_name, raw_cells) in enumerate(pairs):
            metas.append(
                ColumnMeta(
                    name=col_name,
                    position=pos,
                    declared_class=declared.get(col_name.lower()),
                )
            )
            if canonical:
                col = tuple(raw_cells)
            else:
                col = tuple(
                    canonicalize(v) if isinstance(v, str) else v for v in raw_cells
                )
            data.append(col)
            row_count = len(col)
        return cls(name=name, columns=tuple(metas), cells=tuple(data), row_count=row_count)

    @classmethod
    def from_rows(
        cls,
        name: str,
        column_names: Sequence[str],
        rows: Iterable[Sequence[CellValue]],
        declared_classes: Mapping[str, "ColumnClass"] | None = None,
    ) -> "Table":
        """Build a table from row-major data (the test-fixture workhorse)."""
        cols: list[list[CellValue]] = [[] for _ in column_names]
        for row in rows:
            if len(row) != len(column_names):
                raise ValueError(f"row has {len(row)} cells, expected {len(column_names)}")
            for col, value in zip(cols, row):
                col.append(canonicalize(value) if isinstance(value, str) else value)
        return cls.from_columns(
            name, list(zip(column_names, cols)), declared_classes, canonical=True
        )

    # -- access -------------------------------------------------------

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(meta.name for meta in self.columns)

    def has_column(self, column_name: str) -> bool:
        return column_name.lower() in self._index

    def position_of(self, column_name: str) -> int:
        """Resolve a column position; names compare case-insensitively."""
        try:
            return self._index[column_name.lower()]
        except KeyError:
            raise NoSuchColumn(column_name, self.name) from None

    def column_values(self, column_name: str) -> tuple[CellValue, ...]:
        """The column's cells in row order."""
        return self.cells[self.position_of(column_name)]

    def row(self, i: int) -> tuple[CellValue, ...]:
        return tuple(col[i] for col in self.cells)

    def iter_rows(self) -> Iterable[tuple[CellValue, ...]]:
        return zip(*self.cells) if self.cells else iter(())

    # -- serialization ------------------------------------------------

    def to_delimited(self, options: IngestOptions | None = None) -> str:
        """Render back to delimited text, missing cells as the sentinel.

        Re-ingesting the output with the same options yields an equal
        table, provided no present value equals the sentinel itself.
        """
        opts = options or IngestOptions()
        out = io.StringIO()
        writer = csv.writer(out, delimiter=opts.delimiter, lineterminator="\n")
        if opts.has_header:
            writer.writerow(self.column_names)
        for row in self.iter_rows():
            writer.writerow([opts.na_token if v is None else v for v in row])
        return out.getvalue()


def column_values(table: Table, column_name: str) -> tuple[CellValue, ...]:
    """Module-level alias for :meth:`Table.column_values`."""
    return table.column_values(column_name)


def ingest_delimited(source: bytes | IO[bytes], options: IngestOptions | None = None) -> Table:
    """Parse RFC-4180-style delimited text into a :class:`Table`.

    ``source`` is a byte string or binary stream; UTF-8 only, with a BOM
    stripped if present. Empty fields and the sentinel become missing.

    Raises :class:`IngestError` for undecodable bytes, zero columns,
    duplicate or empty header names, and ragged rows (``row`` carries
    the 1-based record number, counting the header as record 1).
    """
    opts = options or IngestOptions()
    if len(opts.delimiter) != 1:
        raise IngestError(f"delimiter must be a single character, got {opts.delimiter!r}")

    raw = source if isinstance(source, bytes) else source.read()
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise IngestError(f"input is not valid UTF-8: {exc}") from None

    records = csv.reader(io.StringIO(text), delimiter=opts.delimiter)
    record_offset = 0

    if opts.has_header:
        header_raw = next(records, None)
        if not header_raw:
            raise IngestError("no columns: input is empty")
        record_offset = 1
        names = []
        seen = set()
        for cell in header_raw:
            name = cell.strip(_ASCII_WS)
            if not name:
                raise IngestError(f"empty column name in header {header_raw!r}", row=1)
            if name.lower() in seen:
                raise IngestError(f"duplicate column name {name!r}", row=1)
            seen.add(name.lower())
            names.append(name)
        n_cols = len(names)
        cols: list[list[CellValue]] = [[] for _ in range(n_cols)]
    else:
        names = []
        n_cols = -1  # fixed by the first record
        cols = []

    row_count = 0
    for i, record in enumerate(records, start=1):
        if n_cols < 0:
            n_cols = len(record)
            if n_cols == 0:
                raise IngestError("no columns: first record is empty", row=1)
            names = [f"col_{j}" for j in range(n_cols)]
            cols = [[] for _ in range(n_cols)]
        if len(record) != n_cols:
            raise IngestError(
                f"ragged row: {len(record)} fields, expected {n_cols}",
                row=i + record_offset,
            )
        for col, cell in zip(cols, record):
            value = canonicalize(cell)
            col.append(None if value == opts.na_token else value)
        row_count += 1

    if n_cols < 0:
        raise IngestError("no columns: input is empty")

    metas = tuple(ColumnMeta(name=n, position=p) for p, n in enumerate(names))
    return Table(
        name=opts.table_name,
        columns=metas,
        cells=tuple(tuple(c) for c in cols),
        row_count=row_count,
    )
