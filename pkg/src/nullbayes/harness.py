"""Repeatable retrieval and imputation experiments.

The rewriting experiment hides a fresh copy of the data behind a
query-only source, nulls out the queried attributes on part of it, runs
each rewriting method, and measures cumulative precision/recall over the
uncertain answers (tuples whose constrained cells are null in the source
but whose held-back ground truth is known).  The imputation experiment
sweeps evidence incompleteness and measures how well each method restores
nulled target cells.  Every random choice is derived from the experiment
seed, so runs repeat exactly.
"""

from __future__ import annotations

import time
import warnings
from collections.abc import Sequence
from dataclasses import dataclass, field

from .afd import (
    NoRuleError,
    NotApplicableError,
    afd_impute_tuple,
    fit_naive_bayes,
    mine_afds,
)
from .bayesnet import BayesNet, StructureSearchConfig, fit_parameters, learn_structure, sample_rows
from .imputation import GibbsParams, impute_table
from .rewriting import (
    BeamConfig,
    RewritingResult,
    afd_all_attributes,
    afd_highest_confidence,
    afd_rewrite_single,
    bn_all_mb,
    bn_beam,
)
from .source import AutonomousSource
from .synth import car_demo_net
from .tabular import (
    Row,
    SelectionQuery,
    Table,
    discretize,
    inject_nulls,
    load_csv,
    sample_table,
)

__all__ = [
    "ExperimentConfig",
    "PrPoint",
    "PrCurve",
    "ImputationRun",
    "load_config",
    "parse_config",
    "split_table",
    "run_rewriting_experiment",
    "run_imputation_experiment",
    "pr_csv_lines",
    "imputation_csv_lines",
    "format_timing_table",
]

REWRITING_METHODS = (
    "bn-all-mb",
    "bn-beam",
    "afd",
    "afd-all-attributes",
    "afd-highest-confidence",
)
IMPUTATION_METHODS = ("afd", "bn-exact", "bn-gibbs")

# fixed offsets for deriving independent rng streams from one experiment seed
_S_DATA, _S_SPLIT, _S_QUERY_NULLS, _S_TARGET_NULLS, _S_LEVEL_NULLS = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; parsed from flat ``key = value`` text."""

    mode: str = "rewriting"
    dataset: str | None = None  # CSV path; None means the synthetic car table
    null_token: str = ""
    synthetic_rows: int = 5000
    discretize_rules: dict[str, int] = field(default_factory=dict)
    train_fraction: float = 0.15
    test_null_fraction: float = 0.5
    seeds: tuple[int, ...] = (0,)
    queries: tuple[SelectionQuery, ...] = ()
    methods: tuple[str, ...] = ()
    top_k: int = 10
    alpha: float = 0.0
    beam_width: int = 5
    beam_depth: int = 2
    query_limit: int | None = None
    targets: tuple[str, ...] = ()
    levels: tuple[int, ...] = (0, 10, 20, 30, 40, 50, 60, 70, 80, 90)
    gibbs_samples: int = 250
    gibbs_burn_in: int = 100
    max_parents: int = 2
    restarts: int = 3
    max_iterations: int = 200
    score: str = "bic"
    ess: float = 1.0
    pseudo_count: float = 1.0
    afd_max_lhs: int = 2
    afd_min_confidence: float = 0.0

    def effective_methods(self) -> tuple[str, ...]:
        if self.methods:
            return self.methods
        return REWRITING_METHODS[:3] if self.mode == "rewriting" else IMPUTATION_METHODS

    def validate(self) -> None:
        if self.mode not in ("rewriting", "imputation"):
            raise ValueError(f"unknown mode {self.mode!r}")
        known = REWRITING_METHODS if self.mode == "rewriting" else IMPUTATION_METHODS
        for m in self.effective_methods():
            if m not in known:
                raise ValueError(f"unknown method {m!r} for mode {self.mode!r}")
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must be in (0, 1)")
        if not 0 <= self.test_null_fraction <= 1:
            raise ValueError("test_null_fraction must be in [0, 1]")
        if self.mode == "rewriting" and not self.queries:
            raise ValueError("rewriting mode needs at least one query")
        if self.mode == "imputation" and not self.targets:
            raise ValueError("imputation mode needs target attributes")
        for level in self.levels:
            if not 0 <= level <= 100:
                raise ValueError("levels are percentages in 0..100")


_INT_KEYS = {
    "synthetic_rows",
    "top_k",
    "beam_width",
    "beam_depth",
    "gibbs_samples",
    "gibbs_burn_in",
    "max_parents",
    "restarts",
    "max_iterations",
    "afd_max_lhs",
}
_FLOAT_KEYS = {
    "train_fraction",
    "test_null_fraction",
    "alpha",
    "ess",
    "pseudo_count",
    "afd_min_confidence",
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse flat ``key = value`` lines; ``#`` starts a comment.

    ``query`` may repeat.  List values (seeds, methods, levels, targets)
    are comma-separated.  Unknown keys are errors.
    """
    values: dict[str, object] = {}
    queries: list[SelectionQuery] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "query":
            queries.append(SelectionQuery.parse(value))
        elif key in ("mode", "dataset", "null_token", "score"):
            values[key] = value
        elif key in _INT_KEYS:
            values[key] = int(value)
        elif key in _FLOAT_KEYS:
            values[key] = float(value)
        elif key == "query_limit":
            values[key] = None if value.lower() in ("", "none") else int(value)
        elif key == "seeds":
            values[key] = tuple(int(v) for v in value.split(",") if v.strip())
        elif key == "levels":
            values[key] = tuple(int(v) for v in value.split(",") if v.strip())
        elif key in ("methods", "targets"):
            values[key] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "discretize":
            rules: dict[str, int] = {}
            for part in value.split(","):
                part = part.strip()
                if not part:
                    continue
                attr, _, gran = part.partition(":")
                rules[attr.strip()] = int(gran)
            values["discretize_rules"] = rules
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    cfg = ExperimentConfig(queries=tuple(queries), **values)  # type: ignore[arg-type]
    cfg.validate()
    return cfg


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# shared plumbing


def split_table(table: Table, fraction: float, seed) -> tuple[Table, Table]:
    """Disjoint (train, test) split; train has ceil(fraction * N) rows.

    Both halves keep the full table's schema, so their domains agree.
    """
    train = sample_table(table, fraction, seed)
    train_ids = {r.id for r in train.rows}
    test = Table(table.schema, [r for r in table.rows if r.id not in train_ids])
    return train, test


def _experiment_table(cfg: ExperimentConfig, seed: int, table: Table | None) -> Table:
    if table is not None:
        got = table
    elif cfg.dataset is not None:
        got = load_csv(cfg.dataset, cfg.null_token)
    else:
        got = sample_rows(car_demo_net(), cfg.synthetic_rows, seed=(seed, _S_DATA))
    if cfg.discretize_rules:
        got = discretize(got, cfg.discretize_rules)
    return got


@dataclass(frozen=True)
class _Models:
    net: BayesNet
    afds: list
    nb: object


def _train_models(cfg: ExperimentConfig, train: Table, seed: int) -> _Models:
    scfg = StructureSearchConfig(
        max_in_degree=cfg.max_parents,
        restarts=cfg.restarts,
        max_iterations=cfg.max_iterations,
        score=cfg.score,
        ess=cfg.ess,
        seed=seed,
    )
    net = fit_parameters(learn_structure(train, scfg), train, cfg.pseudo_count)
    afds = mine_afds(train, cfg.afd_max_lhs, cfg.afd_min_confidence)
    nb = fit_naive_bayes(train)
    return _Models(net, afds, nb)


# ---------------------------------------------------------------------------
# rewriting experiment


@dataclass(frozen=True)
class PrPoint:
    query_index: int  # 1-based position in the issued sequence
    precision: float
    recall: float


@dataclass(frozen=True)
class PrCurve:
    method: str
    query: SelectionQuery
    seed: int
    points: tuple[PrPoint, ...]
    relevant_total: int
    truncated: bool


def _run_method(
    method: str, models: _Models, source: AutonomousSource, query: SelectionQuery,
    cfg: ExperimentConfig, sample: Table, ratio: float,
) -> RewritingResult:
    if method == "bn-all-mb":
        return bn_all_mb(models.net, sample, source, query, cfg.top_k, cfg.alpha, ratio)
    if method == "bn-beam":
        beam = BeamConfig(cfg.beam_width, cfg.beam_depth, cfg.alpha, cfg.top_k)
        return bn_beam(models.net, sample, source, query, beam, ratio)
    if method == "afd":
        return afd_rewrite_single(
            models.afds, models.nb, sample, source, query, cfg.top_k, cfg.alpha, ratio
        )
    if method == "afd-all-attributes":
        return afd_all_attributes(
            models.afds, models.nb, sample, source, query, cfg.top_k, cfg.alpha, ratio
        )
    if method == "afd-highest-confidence":
        return afd_highest_confidence(
            models.afds, models.nb, sample, source, query, cfg.top_k, cfg.alpha, ratio
        )
    raise ValueError(f"unknown method {method!r}")


def _curve_points(
    result: RewritingResult,
    query: SelectionQuery,
    schema,
    truth_by_id: dict[int, Row],
    relevant_total: int,
) -> tuple[PrPoint, ...]:
    q_idx = [schema.index(a) for a in query.attributes]
    by_query: dict[SelectionQuery, int] = {
        rq.query: i for i, rq in enumerate(result.issued, start=1)
    }
    per_step: dict[int, list[Row]] = {i: [] for i in range(1, len(result.issued) + 1)}
    for answer in result.answers:
        per_step[by_query[answer.query]].append(answer.row)
    points = []
    uncertain = 0
    relevant = 0
    for i in range(1, len(result.issued) + 1):
        for row in per_step[i]:
            if all(row.cells[j] is not None for j in q_idx):
                continue  # certain non-answer: its constrained values are visible
            uncertain += 1
            truth = truth_by_id[row.id]
            if query.matches(schema, truth):
                relevant += 1
        precision = relevant / uncertain if uncertain else 0.0
        recall = relevant / relevant_total
        points.append(PrPoint(i, precision, recall))
    return tuple(points)


def run_rewriting_experiment(
    cfg: ExperimentConfig, table: Table | None = None
) -> list[PrCurve]:
    """One PrCurve per (seed, query, method) that produced rewrites.

    Methods that do not apply to a query (no AFD, overlapping determining
    sets) are skipped with a warning, as are queries with no uncertain
    relevant tuples after null injection.
    """
    cfg.validate()
    if cfg.mode != "rewriting":
        raise ValueError("config mode is not 'rewriting'")
    curves: list[PrCurve] = []
    for seed in cfg.seeds:
        data = _experiment_table(cfg, seed, table)
        for query in cfg.queries:
            query.validate(data.schema)
        train, test = split_table(data, cfg.train_fraction, (seed, _S_SPLIT))
        truth_by_id = {r.id: r for r in test.rows}
        models = _train_models(cfg, train, seed)
        for qi, query in enumerate(cfg.queries):
            visible = inject_nulls(
                test, query.attributes, cfg.test_null_fraction, (seed, _S_QUERY_NULLS, qi)
            )
            q_idx = [data.schema.index(a) for a in query.attributes]
            relevant_total = 0
            for row in visible.rows:
                if all(row.cells[j] is not None for j in q_idx):
                    continue
                if query.matches(data.schema, truth_by_id[row.id]):
                    relevant_total += 1
            if relevant_total == 0:
                warnings.warn(
                    f"seed {seed}: no uncertain relevant tuples for {query.text()!r}; skipped",
                    stacklevel=2,
                )
                continue
            ratio = len(visible) / len(train)
            for method in cfg.effective_methods():
                source = AutonomousSource(visible, cfg.query_limit)
                try:
                    result = _run_method(method, models, source, query, cfg, train, ratio)
                except (NoRuleError, NotApplicableError) as exc:
                    warnings.warn(
                        f"seed {seed}: {method} skipped for {query.text()!r}: {exc}",
                        stacklevel=2,
                    )
                    continue
                points = _curve_points(
                    result, query, data.schema, truth_by_id, relevant_total
                )
                curves.append(
                    PrCurve(method, query, seed, points, relevant_total, result.truncated)
                )
    return curves


# ---------------------------------------------------------------------------
# imputation experiment


@dataclass(frozen=True)
class ImputationRun:
    method: str
    level: int  # evidence incompleteness, percent
    seed: int
    cell_accuracy: float
    tuple_accuracy: float
    cells: int
    seconds: float


def _target_accuracy(
    schema, imputed: Table, truth_by_id: dict[int, Row], targets: Sequence[str]
) -> tuple[float, float, int]:
    t_idx = [schema.index(t) for t in targets]
    cell_hits = cells = row_hits = rows = 0
    for row in imputed.rows:
        truth = truth_by_id[row.id]
        ok = True
        counted = False
        for j in t_idx:
            if truth.cells[j] is None:
                continue  # truth itself unknown; cell not scoreable
            counted = True
            cells += 1
            if row.cells[j] is not None and row.cells[j] == truth.cells[j]:
                cell_hits += 1
            else:
                ok = False
        if counted:
            rows += 1
            row_hits += 1 if ok else 0
    if cells == 0:
        raise ValueError("no scoreable target cells; is the ground truth all null?")
    return cell_hits / cells, row_hits / rows, cells


def run_imputation_experiment(
    cfg: ExperimentConfig, table: Table | None = None
) -> list[ImputationRun]:
    """Sweep evidence incompleteness and measure target restoration.

    Target attributes are nulled in every test tuple.  At level L each
    non-target attribute is independently nulled in L percent of the test
    tuples.  Accuracy is per target cell and per tuple (all targets
    correct), against the held-back ground truth.
    """
    cfg.validate()
    if cfg.mode != "imputation":
        raise ValueError("config mode is not 'imputation'")
    runs: list[ImputationRun] = []
    for seed in cfg.seeds:
        data = _experiment_table(cfg, seed, table)
        for target in cfg.targets:
            data.schema.index(target)
        train, test = split_table(data, cfg.train_fraction, (seed, _S_SPLIT))
        truth_by_id = {r.id: r for r in test.rows}
        models = _train_models(cfg, train, seed)
        hidden = inject_nulls(test, cfg.targets, 1.0, (seed, _S_TARGET_NULLS))
        evidence_attrs = [a for a in data.schema.attributes if a not in cfg.targets]
        for li, level in enumerate(cfg.levels):
            visible = hidden
            if level:
                for ai, attr in enumerate(evidence_attrs):
                    visible = inject_nulls(
                        visible, [attr], level / 100.0, (seed, _S_LEVEL_NULLS, li, ai)
                    )
            for method in cfg.effective_methods():
                t0 = time.perf_counter()
                if method == "afd":
                    rows = [
                        afd_impute_tuple(models.afds, models.nb, row)[0]
                        for row in visible.rows
                    ]
                    imputed = Table(data.schema, rows)
                elif method == "bn-exact":
                    imputed, _ = impute_table(models.net, visible, engine="exact")
                elif method == "bn-gibbs":
                    params = GibbsParams(
                        cfg.gibbs_samples, cfg.gibbs_burn_in, seed=seed * 1000 + li
                    )
                    imputed, _ = impute_table(
                        models.net, visible, engine="gibbs", gibbs=params
                    )
                else:
                    raise ValueError(f"unknown method {method!r}")
                seconds = time.perf_counter() - t0
                cell_acc, tuple_acc, cells = _target_accuracy(
                    data.schema, imputed, truth_by_id, cfg.targets
                )
                runs.append(
                    ImputationRun(method, level, seed, cell_acc, tuple_acc, cells, seconds)
                )
    return runs


# ---------------------------------------------------------------------------
# rendering


def pr_csv_lines(curve: PrCurve) -> list[str]:
    lines = ["method,query_index,precision,recall"]
    for p in curve.points:
        lines.append(f"{curve.method},{p.query_index},{p.precision:.10g},{p.recall:.10g}")
    return lines


def imputation_csv_lines(runs: Sequence[ImputationRun]) -> list[str]:
    lines = ["method,level,seed,cell_accuracy,tuple_accuracy,cells"]
    for r in runs:
        lines.append(
            f"{r.method},{r.level},{r.seed},{r.cell_accuracy:.10g},"
            f"{r.tuple_accuracy:.10g},{r.cells}"
        )
    return lines


def format_timing_table(runs: Sequence[ImputationRun]) -> str:
    """Mean wall-clock seconds per method, one row per incompleteness level."""
    methods: list[str] = []
    for r in runs:
        if r.method not in methods:
            methods.append(r.method)
    levels = sorted({r.level for r in runs})
    header = ["incomplete%"] + [f"{m}(s)" for m in methods]
    widths = [max(12, len(h) + 2) for h in header]
    out = ["".join(h.ljust(w) for h, w in zip(header, widths))]
    for level in levels:
        cells = [str(level)]
        for m in methods:
            vals = [r.seconds for r in runs if r.level == level and r.method == m]
            cells.append(f"{sum(vals) / len(vals):.2f}" if vals else "-")
        out.append("".join(c.ljust(w) for c, w in zip(cells, widths)))
    return "\n".join(out)
