"""Filling missing cells with most-probable values.

The default strategy imputes all of a tuple's missing attributes at once:
one joint posterior given the observed cells, then the single most probable
combination.  The "independent" strategy takes each attribute's marginal
argmax separately; it is kept for comparison because it can produce
mutually inconsistent combinations that the joint argmax never does.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .bayesnet import BayesNet
from .inference import map_assignment, posterior_exact, posterior_gibbs
from .tabular import Row, Table

__all__ = ["GibbsParams", "ImputationReport", "impute_tuple", "impute_table"]


@dataclass(frozen=True)
class GibbsParams:
    samples: int = 250
    burn_in: int = 100
    seed: int = 0


@dataclass(frozen=True)
class ImputationReport:
    """Counts and (when ground truth is given) accuracy of one imputation run.

    ``cell_accuracy`` is the fraction of imputed cells that match the truth;
    ``tuple_accuracy`` the fraction of imputed tuples with every imputed cell
    correct.  ``attribute_accuracy`` breaks cells out per attribute and
    ``combination_accuracy`` breaks all-cells-correct out per missing-attribute
    combination.  Cells whose ground truth is null are ungradeable and appear
    in no denominator.  Accuracies are None without ground truth.
    """

    tuples_total: int
    tuples_imputed: int
    cells_imputed: dict[str, int]
    cell_accuracy: float | None
    tuple_accuracy: float | None
    attribute_accuracy: dict[str, float] | None
    combination_accuracy: dict[tuple[str, ...], float] | None
    duration_seconds: float


def _missing_attrs(net: BayesNet, row: Row) -> tuple[str, ...]:
    return tuple(a for a, c in zip(net.schema.attributes, row.cells) if c is None)


def _posterior(net, targets, evidence, engine, gibbs, seed):
    if engine == "exact":
        return posterior_exact(net, targets, evidence)
    if engine == "gibbs":
        g = gibbs or GibbsParams()
        return posterior_gibbs(
            net, targets, evidence, samples=g.samples, burn_in=g.burn_in, seed=seed
        )
    raise ValueError(f"unknown engine {engine!r}")


def _fill(net: BayesNet, row: Row, missing: tuple[str, ...], combo: tuple[str, ...]) -> Row:
    filled = dict(zip(missing, combo))
    cells = tuple(
        filled[a] if c is None else c for a, c in zip(net.schema.attributes, row.cells)
    )
    return Row(row.id, cells)


def _map_combo(net, row, missing, engine, gibbs, joint, seed) -> tuple[str, ...]:
    evidence = {a: c for a, c in zip(net.schema.attributes, row.cells) if c is not None}
    if joint:
        return map_assignment(_posterior(net, missing, evidence, engine, gibbs, seed))
    return tuple(
        map_assignment(_posterior(net, (attr,), evidence, engine, gibbs, seed))[0]
        for attr in missing
    )


def impute_tuple(
    net: BayesNet,
    row: Row,
    engine: str = "exact",
    gibbs: GibbsParams | None = None,
    joint: bool = True,
) -> Row:
    """Return ``row`` with missing cells filled by MAP assignment.

    With ``joint`` (the default) the fill is the argmax of the joint
    posterior over all missing attributes; otherwise each missing attribute
    is filled with its own marginal argmax.  Non-null cells are never
    altered; a complete row is returned unchanged.
    """
    missing = _missing_attrs(net, row)
    if not missing:
        return row
    seed = gibbs.seed if gibbs else 0
    combo = _map_combo(net, row, missing, engine, gibbs, joint, seed)
    return _fill(net, row, missing, combo)


def impute_table(
    net: BayesNet,
    table: Table,
    engine: str = "exact",
    gibbs: GibbsParams | None = None,
    joint: bool = True,
    truth: Table | None = None,
) -> tuple[Table, ImputationReport]:
    """Impute every incomplete tuple of ``table``.

    Exact-engine posteriors are memoized by (missing attributes, evidence),
    so repeated patterns cost one elimination run.  With the Gibbs engine
    each tuple gets its own chain seeded by (base seed, tuple id), making
    results independent of processing order.  ``truth`` must have the same
    schema and row ids; accuracy is measured over imputed cells only, and
    cells whose ground truth is itself null are left out of every
    denominator (a tuple counts as correct when all its gradeable cells
    match).
    """
    if table.schema != net.schema:
        raise ValueError("table schema does not match the network")
    if truth is not None and truth.schema != table.schema:
        raise ValueError("ground-truth schema does not match the table")
    truth_by_id = {r.id: r for r in truth.rows} if truth is not None else None
    if truth_by_id is not None:
        for row in table.rows:
            if row.id not in truth_by_id:
                raise ValueError(f"ground truth is missing row id {row.id}")

    t0 = time.perf_counter()
    cache: dict[tuple, tuple[str, ...]] = {}
    out_rows: list[Row] = []
    cells_imputed: dict[str, int] = {}
    attr_hits: dict[str, int] = {}
    combo_totals: dict[tuple[str, ...], int] = {}
    combo_hits: dict[tuple[str, ...], int] = {}
    attr_scored: dict[str, int] = {}
    tuples_imputed = 0
    tuples_scored = 0
    cell_hits = 0
    cell_total = 0
    tuple_hits = 0
    base_seed = gibbs.seed if gibbs else 0

    for row in table.rows:
        missing = _missing_attrs(net, row)
        if not missing:
            out_rows.append(row)
            continue
        tuples_imputed += 1
        if engine == "exact":
            evidence_key = tuple(
                (a, c) for a, c in zip(net.schema.attributes, row.cells) if c is not None
            )
            key = (missing, evidence_key, joint)
            combo = cache.get(key)
            if combo is None:
                combo = _map_combo(net, row, missing, engine, gibbs, joint, 0)
                cache[key] = combo
        else:
            combo = _map_combo(net, row, missing, engine, gibbs, joint, (base_seed, row.id))
        new_row = _fill(net, row, missing, combo)
        out_rows.append(new_row)

        for attr in missing:
            cells_imputed[attr] = cells_imputed.get(attr, 0) + 1
        if truth_by_id is not None:
            true_row = truth_by_id[row.id]
            scored = 0
            row_hits = 0
            for attr in missing:
                actual = net.schema.value(true_row, attr)
                if actual is None:
                    continue  # no answer to grade against
                scored += 1
                cell_total += 1
                attr_scored[attr] = attr_scored.get(attr, 0) + 1
                if net.schema.value(new_row, attr) == actual:
                    cell_hits += 1
                    row_hits += 1
                    attr_hits[attr] = attr_hits.get(attr, 0) + 1
            if scored:
                tuples_scored += 1
                combo_totals[missing] = combo_totals.get(missing, 0) + 1
                if row_hits == scored:
                    tuple_hits += 1
                    combo_hits[missing] = combo_hits.get(missing, 0) + 1

    duration = time.perf_counter() - t0
    if truth_by_id is not None:
        cell_accuracy = cell_hits / cell_total if cell_total else 1.0
        tuple_accuracy = tuple_hits / tuples_scored if tuples_scored else 1.0
        attribute_accuracy = {
            a: attr_hits.get(a, 0) / n for a, n in sorted(attr_scored.items())
        }
        combination_accuracy = {
            c: combo_hits.get(c, 0) / n for c, n in sorted(combo_totals.items())
        }
    else:
        cell_accuracy = tuple_accuracy = None
        attribute_accuracy = combination_accuracy = None
    report = ImputationReport(
        tuples_total=len(table.rows),
        tuples_imputed=tuples_imputed,
        cells_imputed=dict(sorted(cells_imputed.items())),
        cell_accuracy=cell_accuracy,
        tuple_accuracy=tuple_accuracy,
        attribute_accuracy=attribute_accuracy,
        combination_accuracy=combination_accuracy,
        duration_seconds=duration,
    )
    return Table(table.schema, out_rows), report
