"""A queryable tuple store that only answers selection queries.

Models an autonomous database behind a restricted interface: callers may
submit equality-conjunction queries (no scans, no writes) and may be cut
off after a fixed number of them.  Running out of budget raises; an empty
answer is an answer, not an error.
"""

from __future__ import annotations

import warnings

from .tabular import Row, SelectionQuery, Table

__all__ = ["AutonomousSource", "QueryBudgetError"]


class QueryBudgetError(RuntimeError):
    """The source refused a query because the budget is exhausted."""


class AutonomousSource:
    """Selection-query access to a table, with an optional query budget.

    ``query_limit`` of None means unlimited.  ``queries_used`` counts only
    answered queries; a refused query leaves it unchanged.
    """

    def __init__(self, table: Table, query_limit: int | None = None):
        if query_limit is not None and query_limit < 0:
            raise ValueError("query_limit must be >= 0 or None")
        self._table = table
        self._limit = query_limit
        self._used = 0

    @property
    def schema(self):
        return self._table.schema

    @property
    def queries_used(self) -> int:
        return self._used

    @property
    def query_limit(self) -> int | None:
        return self._limit

    def answer(self, query: SelectionQuery) -> list[Row]:
        """Certain answers to the query: rows whose constrained cells match.

        Null cells never match.  A value the source has never seen is a
        legitimate query that matches nothing, not an error; an attribute
        the source does not have raises KeyError (the form has no such
        field).  Raises QueryBudgetError when the budget is already spent;
        the failed attempt is not counted.
        """
        if self._limit is not None and self._used >= self._limit:
            raise QueryBudgetError(
                f"query budget of {self._limit} exhausted after {self._used} queries"
            )
        schema = self._table.schema
        unseen = any(value not in schema.domain(attr) for attr, value in query.items)
        self._used += 1
        if unseen:
            return []
        return [r for r in self._table.rows if query.matches(schema, r)]

    def estimate_ratio(self, sample: Table) -> float:
        """|source| / |sample|, measured with one unconstrained probe.

        The probe counts against the budget.  A ratio below 1 (sample larger
        than the source) is returned as-is with a warning.
        """
        if len(sample) == 0:
            raise ValueError("empty sample")
        rows = self.answer(SelectionQuery())
        ratio = len(rows) / len(sample)
        if ratio < 1.0:
            warnings.warn(
                f"sample ({len(sample)} rows) is larger than the source ({len(rows)} rows)",
                stacklevel=2,
            )
        return ratio
