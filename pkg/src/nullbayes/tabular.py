"""Categorical tables with explicit missing cells.

A table is a fixed schema (ordered attributes, finite string domains) plus
rows whose cells are either a domain label or None.  None marks a missing
value; it is never a domain member.  Selection queries are conjunctions of
attribute = value equality predicates.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ParseError",
    "Schema",
    "Row",
    "Table",
    "SelectionQuery",
    "load_csv",
    "save_csv",
    "discretize",
    "select",
    "project_distinct",
    "inject_nulls",
    "align_table",
    "sample_table",
]


class ParseError(ValueError):
    """Raised for malformed input files."""


class Schema:
    """Ordered attribute names and the sorted label domain of each attribute.

    Domains are stored sorted so that index order equals lexicographic label
    order everywhere downstream (argmax tie-breaking relies on this).
    """

    __slots__ = ("attributes", "domains", "_index")

    def __init__(self, attributes: Iterable[str], domains: Mapping[str, Iterable[str]]):
        self.attributes: tuple[str, ...] = tuple(attributes)
        if len(set(self.attributes)) != len(self.attributes):
            raise ValueError("duplicate attribute names in schema")
        if not self.attributes:
            raise ValueError("schema needs at least one attribute")
        fixed: dict[str, tuple[str, ...]] = {}
        for attr in self.attributes:
            if attr not in domains:
                raise ValueError(f"no domain given for attribute {attr!r}")
            labels = tuple(domains[attr])
            if not labels:
                raise ValueError(f"empty domain for attribute {attr!r}")
            for v in labels:
                if not isinstance(v, str):
                    raise ValueError(f"domain of {attr!r} contains non-string label {v!r}")
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate labels in domain of {attr!r}")
            fixed[attr] = tuple(sorted(labels))
        self.domains: dict[str, tuple[str, ...]] = fixed
        self._index = {a: i for i, a in enumerate(self.attributes)}

    def index(self, attr: str) -> int:
        try:
            return self._index[attr]
        except KeyError:
            raise KeyError(f"unknown attribute {attr!r}") from None

    def domain(self, attr: str) -> tuple[str, ...]:
        self.index(attr)
        return self.domains[attr]

    def value(self, row: "Row", attr: str) -> str | None:
        return row.cells[self.index(attr)]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Schema)
            and self.attributes == other.attributes
            and self.domains == other.domains
        )

    def __hash__(self) -> int:
        return hash((self.attributes, tuple(self.domains[a] for a in self.attributes)))

    def __repr__(self) -> str:
        return f"Schema({list(self.attributes)!r})"


@dataclass(frozen=True)
class Row:
    """One tuple: a stable integer id and one cell per schema attribute."""

    id: int
    cells: tuple[str | None, ...]


class Table:
    """Immutable rows under one schema.

    Invariants checked on construction: unique row ids, one cell per
    attribute, and every non-null cell inside its attribute's domain.
    """

    __slots__ = ("schema", "rows")

    def __init__(self, schema: Schema, rows: Iterable[Row]):
        self.schema = schema
        self.rows: tuple[Row, ...] = tuple(rows)
        seen: set[int] = set()
        arity = len(schema.attributes)
        for row in self.rows:
            if row.id in seen:
                raise ValueError(f"duplicate row id {row.id}")
            seen.add(row.id)
            if len(row.cells) != arity:
                raise ValueError(f"row {row.id} has {len(row.cells)} cells, schema has {arity}")
            for attr, cell in zip(schema.attributes, row.cells):
                if cell is not None and cell not in schema.domains[attr]:
                    raise ValueError(f"row {row.id}: value {cell!r} not in domain of {attr!r}")

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Table) and self.schema == other.schema and self.rows == other.rows

    def __repr__(self) -> str:
        return f"Table({len(self.rows)} rows, {len(self.schema.attributes)} attributes)"

    def row_by_id(self, row_id: int) -> Row:
        for row in self.rows:
            if row.id == row_id:
                return row
        raise KeyError(f"no row with id {row_id}")

    def value(self, row: Row, attr: str) -> str | None:
        return self.schema.value(row, attr)


class SelectionQuery:
    """Conjunction of attribute = value predicates, stored sorted by attribute."""

    __slots__ = ("items",)

    def __init__(self, predicates: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        if isinstance(predicates, Mapping):
            pairs = list(predicates.items())
        else:
            pairs = list(predicates)
        attrs = [a for a, _ in pairs]
        if len(set(attrs)) != len(attrs):
            raise ValueError("duplicate attribute in query")
        items = tuple(sorted((str(a), str(v)) for a, v in pairs))
        object.__setattr__(self, "items", items)

    @classmethod
    def parse(cls, text: str) -> "SelectionQuery":
        """Parse ``"Attr=Value & Attr2=Value2"``.  Whitespace around parts is trimmed."""
        pairs = []
        for part in text.split("&"):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ParseError(f"bad predicate {part!r}: expected Attr=Value")
            attr, _, value = part.partition("=")
            attr, value = attr.strip(), value.strip()
            if not attr or not value:
                raise ParseError(f"bad predicate {part!r}: empty attribute or value")
            pairs.append((attr, value))
        if not pairs:
            raise ParseError("empty query")
        return cls(pairs)

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.items)

    def value(self, attr: str) -> str:
        for a, v in self.items:
            if a == attr:
                return v
        raise KeyError(f"query does not constrain {attr!r}")

    def validate(self, schema: Schema) -> None:
        for attr, value in self.items:
            if value not in schema.domain(attr):
                raise ValueError(f"value {value!r} not in domain of {attr!r}")

    def matches(self, schema: Schema, row: Row, null_wildcard: bool = False) -> bool:
        """True if the row satisfies every predicate.

        With ``null_wildcard`` a null cell counts as a match; this is the
        could-match semantics used by evaluation oracles, not by sources.
        """
        for attr, value in self.items:
            cell = row.cells[schema.index(attr)]
            if cell is None:
                if not null_wildcard:
                    return False
            elif cell != value:
                return False
        return True

    def extended(self, attr: str, value: str) -> "SelectionQuery":
        return SelectionQuery(self.items + ((attr, value),))

    def text(self) -> str:
        return " & ".join(f"{a}={v}" for a, v in self.items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SelectionQuery) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __repr__(self) -> str:
        return f"SelectionQuery({self.text()!r})"


def load_csv(path: str, null_token: str = "") -> Table:
    """Load a header-first CSV file as a Table.

    Cells are trimmed; a trimmed cell equal to ``null_token`` becomes a
    missing value.  Row ids are assigned 1..N in file order.  Domains are the
    sets of observed non-null values per column.

    Raises
    ------
    ParseError
        On an empty file, a row whose arity differs from the header (the
        message names the line), or a column with no non-null values.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        attrs = [h.strip() for h in header]
        if any(not a for a in attrs):
            raise ParseError(f"{path}: blank attribute name in header")
        raw_rows: list[list[str | None]] = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(attrs):
                raise ParseError(
                    f"{path}: line {lineno}: expected {len(attrs)} fields, got {len(record)}"
                )
            cells: list[str | None] = []
            for cell in record:
                cell = cell.strip()
                cells.append(None if cell == null_token else cell)
            raw_rows.append(cells)
    domains: dict[str, set[str]] = {a: set() for a in attrs}
    for cells in raw_rows:
        for attr, cell in zip(attrs, cells):
            if cell is not None:
                domains[attr].add(cell)
    for attr in attrs:
        if not domains[attr]:
            raise ParseError(f"{path}: empty domain for attribute {attr!r}")
    schema = Schema(attrs, domains)
    rows = [Row(i, tuple(cells)) for i, cells in enumerate(raw_rows, start=1)]
    return Table(schema, rows)


def save_csv(table: Table, path: str, null_token: str = "") -> None:
    """Write a Table back to CSV, rendering missing cells as ``null_token``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.schema.attributes)
        for row in table.rows:
            writer.writerow([null_token if c is None else c for c in row.cells])


def _round_to_multiple(value: int, granularity: int) -> int:
    # nearest multiple; exact midpoint rounds up
    q, r = divmod(value, granularity)
    if 2 * r >= granularity:
        q += 1
    return q * granularity


def discretize(table: Table, rules: Mapping[str, int]) -> Table:
    """Bucket integer-labeled attributes to the nearest multiple of a granularity.

    ``rules`` maps attribute name to a positive integer granularity.  Null
    cells stay null.  Idempotent: already-bucketed values are fixed points.

    Raises
    ------
    ValueError
        For an unknown attribute, a non-positive granularity, or a non-integer
        label in a targeted column (the message names attribute and value).
    """
    for attr, gran in rules.items():
        table.schema.index(attr)
        if int(gran) != gran or gran <= 0:
            raise ValueError(f"granularity for {attr!r} must be a positive integer")
    new_rows = []
    for row in table.rows:
        cells = list(row.cells)
        for attr, gran in rules.items():
            i = table.schema.index(attr)
            cell = cells[i]
            if cell is None:
                continue
            try:
                num = int(cell)
            except ValueError:
                raise ValueError(f"attribute {attr!r}: non-numeric label {cell!r}") from None
            cells[i] = str(_round_to_multiple(num, int(gran)))
        new_rows.append(Row(row.id, tuple(cells)))
    domains: dict[str, set[str]] = {a: set() for a in table.schema.attributes}
    for row in new_rows:
        for attr, cell in zip(table.schema.attributes, row.cells):
            if cell is not None:
                domains[attr].add(cell)
    for attr in table.schema.attributes:
        if not domains[attr]:
            # column was entirely null already; keep its old domain
            domains[attr] = set(table.schema.domains[attr])
    return Table(Schema(table.schema.attributes, domains), new_rows)


def select(table: Table, query: SelectionQuery, include_null_matches: bool = False) -> list[Row]:
    """Rows satisfying the query.

    Default semantics are certain answers only: a null cell on a constrained
    attribute never matches.  ``include_null_matches`` switches to
    could-match semantics (nulls act as wildcards).
    """
    query.validate(table.schema)
    return [r for r in table.rows if query.matches(table.schema, r, include_null_matches)]


def project_distinct(
    schema: Schema, rows: Sequence[Row], attrs: Sequence[str]
) -> list[tuple[str, ...]]:
    """Distinct null-free projections of ``rows`` onto ``attrs``.

    Combinations containing a null are dropped.  Order of first occurrence
    is preserved.
    """
    idx = [schema.index(a) for a in attrs]
    seen: set[tuple[str, ...]] = set()
    out: list[tuple[str, ...]] = []
    for row in rows:
        combo = tuple(row.cells[i] for i in idx)
        if any(c is None for c in combo):
            continue
        if combo not in seen:
            seen.add(combo)
            out.append(combo)  # type: ignore[arg-type]
    return out


def inject_nulls(
    table: Table, attrs: Sequence[str], fraction: float, seed: int | Sequence[int]
) -> Table:
    """Null out the listed attributes on a random ceil(fraction*N) subset of rows.

    The subset is drawn without replacement with a generator seeded by
    ``seed``, so equal arguments give equal output.  Row ids and the schema
    (including domains) are unchanged.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must be in [0, 1]")
    idx = [table.schema.index(a) for a in attrs]
    n = len(table.rows)
    k = math.ceil(fraction * n)
    rng = np.random.default_rng(seed)
    hit = set(rng.choice(n, size=k, replace=False).tolist()) if k else set()
    rows = []
    for pos, row in enumerate(table.rows):
        if pos in hit:
            cells = list(row.cells)
            for i in idx:
                cells[i] = None
            rows.append(Row(row.id, tuple(cells)))
        else:
            rows.append(row)
    return Table(table.schema, rows)


def align_table(table: Table, schema: Schema) -> Table:
    """Reorder a table's columns to ``schema`` and revalidate against its domains.

    Useful for pairing freshly loaded data with a saved model: attribute
    sets must match exactly; values outside the schema's domains raise.
    """
    missing = [a for a in schema.attributes if a not in table.schema.attributes]
    extra = [a for a in table.schema.attributes if a not in schema.attributes]
    if missing:
        raise ValueError(f"table lacks attributes {missing}")
    if extra:
        raise ValueError(f"table has unexpected attributes {extra}")
    idx = [table.schema.index(a) for a in schema.attributes]
    rows = [Row(r.id, tuple(r.cells[i] for i in idx)) for r in table.rows]
    return Table(schema, rows)


def sample_table(table: Table, fraction: float, seed: int | Sequence[int]) -> Table:
    """A uniform without-replacement sample of ceil(fraction*N) rows.

    Sampled rows keep their ids and their original relative order.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    n = len(table.rows)
    k = math.ceil(fraction * n)
    rng = np.random.default_rng(seed)
    hit = sorted(rng.choice(n, size=k, replace=False).tolist())
    return Table(table.schema, [table.rows[i] for i in hit])
