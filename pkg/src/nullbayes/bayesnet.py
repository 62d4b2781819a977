"""Discrete Bayesian networks over table schemas.

A network is a DAG over the schema's attributes plus one conditional
probability table per attribute.  CPT axes are ordered (parent_1, ...,
parent_k, attribute), parents sorted by name, each axis indexed in domain
(= lexicographic label) order.  Structure is learned by greedy hill
climbing with random restarts under a local decomposable score (BIC or
BDeu); parameters by smoothed counting.
"""

from __future__ import annotations

import math
import time
import warnings
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .tabular import Row, Schema, Table

__all__ = [
    "BayesNet",
    "ModelFormatError",
    "StructureSearchConfig",
    "learn_structure",
    "fit_parameters",
    "markov_blanket",
    "d_separated",
    "save_model",
    "load_model",
    "sample_rows",
]

_ROW_SUM_TOL = 1e-9


class ModelFormatError(ValueError):
    """Raised when serialized model text cannot be decoded."""


class BayesNet:
    """Immutable DAG + CPTs over a schema.

    Parameters
    ----------
    schema : Schema
    parents : mapping from attribute to an iterable of parent attributes.
        Attributes absent from the mapping are roots.
    cpts : mapping from attribute to an ndarray of shape
        (|dom(p1)|, ..., |dom(pk)|, |dom(X)|) with parents in sorted-name
        order.  Rows (last axis) must sum to 1 within 1e-9 and be
        non-negative.
    """

    __slots__ = ("schema", "parents", "cpts", "_children")

    def __init__(
        self,
        schema: Schema,
        parents: Mapping[str, Iterable[str]],
        cpts: Mapping[str, np.ndarray],
    ):
        self.schema = schema
        for attr in parents:
            schema.index(attr)
        fixed: dict[str, tuple[str, ...]] = {}
        for attr in schema.attributes:
            ps = tuple(sorted(parents.get(attr, ())))
            for p in ps:
                schema.index(p)
                if p == attr:
                    raise ValueError(f"{attr!r} cannot be its own parent")
            if len(set(ps)) != len(ps):
                raise ValueError(f"duplicate parent for {attr!r}")
            fixed[attr] = ps
        self.parents: dict[str, tuple[str, ...]] = fixed
        if _has_cycle(fixed):
            raise ValueError("parent graph has a cycle")
        tables: dict[str, np.ndarray] = {}
        for attr in schema.attributes:
            if attr not in cpts:
                raise ValueError(f"no CPT for {attr!r}")
            want = tuple(len(schema.domain(p)) for p in fixed[attr]) + (
                len(schema.domain(attr)),
            )
            arr = np.array(cpts[attr], dtype=float)
            if arr.shape != want:
                raise ValueError(f"CPT for {attr!r} has shape {arr.shape}, expected {want}")
            if np.any(arr < 0):
                raise ValueError(f"CPT for {attr!r} has negative entries")
            sums = arr.sum(axis=-1)
            if not np.allclose(sums, 1.0, rtol=0, atol=_ROW_SUM_TOL):
                raise ValueError(f"CPT rows for {attr!r} do not sum to 1")
            arr.flags.writeable = False
            tables[attr] = arr
        self.cpts: dict[str, np.ndarray] = tables
        kids: dict[str, list[str]] = {a: [] for a in schema.attributes}
        for attr in schema.attributes:
            for p in fixed[attr]:
                kids[p].append(attr)
        self._children = {a: tuple(sorted(cs)) for a, cs in kids.items()}

    def children(self, attr: str) -> tuple[str, ...]:
        self.schema.index(attr)
        return self._children[attr]

    def topological_order(self) -> list[str]:
        order: list[str] = []
        remaining = {a: set(self.parents[a]) for a in self.schema.attributes}
        while remaining:
            ready = sorted(a for a, ps in remaining.items() if not ps)
            for a in ready:
                order.append(a)
                del remaining[a]
            for ps in remaining.values():
                ps.difference_update(ready)
        return order

    def isclose(self, other: "BayesNet", atol: float = 1e-9) -> bool:
        if self.schema != other.schema or self.parents != other.parents:
            return False
        return all(
            np.allclose(self.cpts[a], other.cpts[a], rtol=0, atol=atol)
            for a in self.schema.attributes
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BayesNet)
            and self.schema == other.schema
            and self.parents == other.parents
            and all(np.array_equal(self.cpts[a], other.cpts[a]) for a in self.schema.attributes)
        )

    def __repr__(self) -> str:
        edges = sum(len(ps) for ps in self.parents.values())
        return f"BayesNet({len(self.schema.attributes)} nodes, {edges} edges)"


def _has_cycle(parents: Mapping[str, tuple[str, ...]]) -> bool:
    WHITE, GREY, BLACK = 0, 1, 2
    color = {a: WHITE for a in parents}

    def visit(a: str) -> bool:
        color[a] = GREY
        for p in parents[a]:
            if color[p] == GREY:
                return True
            if color[p] == WHITE and visit(p):
                return True
        color[a] = BLACK
        return False

    return any(color[a] == WHITE and visit(a) for a in parents)


def uniform_cpts(schema: Schema, parents: Mapping[str, Iterable[str]]) -> dict[str, np.ndarray]:
    """Uniform placeholder CPTs for a given structure."""
    out = {}
    for attr in schema.attributes:
        ps = tuple(sorted(parents.get(attr, ())))
        k = len(schema.domain(attr))
        shape = tuple(len(schema.domain(p)) for p in ps) + (k,)
        out[attr] = np.full(shape, 1.0 / k)
    return out


# ---------------------------------------------------------------------------
# structure learning


@dataclass(frozen=True)
class StructureSearchConfig:
    """Knobs for greedy structure search.

    score is "bic" or "bdeu" (the latter uses ``ess`` as equivalent sample
    size).  ``restarts`` counts hill climbs: the first starts from the empty
    graph, the rest from seeded random DAGs.  ``time_limit`` (seconds) cuts
    the search off, keeping the best network found so far.
    """

    max_in_degree: int = 2
    restarts: int = 3
    max_iterations: int = 200
    score: str = "bic"
    ess: float = 1.0
    seed: int = 0
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.max_in_degree < 0:
            raise ValueError("max_in_degree must be >= 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.score not in ("bic", "bdeu"):
            raise ValueError(f"unknown score {self.score!r}")
        if self.score == "bdeu" and self.ess <= 0:
            raise ValueError("ess must be positive")


class _LocalScores:
    """Decomposable local score with caching, over complete int-coded data."""

    def __init__(self, data: np.ndarray, sizes: Sequence[int], cfg: StructureSearchConfig):
        self.data = data
        self.sizes = tuple(sizes)
        self.n = data.shape[0]
        self.cfg = cfg
        self._cache: dict[tuple[int, frozenset[int]], float] = {}

    def local(self, y: int, parents: frozenset[int]) -> float:
        key = (y, parents)
        got = self._cache.get(key)
        if got is not None:
            return got
        val = self._compute(y, tuple(sorted(parents)))
        self._cache[key] = val
        return val

    def _counts(self, y: int, parents: tuple[int, ...]) -> np.ndarray:
        r = self.sizes[y]
        q = 1
        code = np.zeros(self.n, dtype=np.int64)
        for p in parents:
            code = code * self.sizes[p] + self.data[:, p]
            q *= self.sizes[p]
        flat = np.bincount(code * r + self.data[:, y], minlength=q * r)
        return flat.reshape(q, r).astype(float)

    def _compute(self, y: int, parents: tuple[int, ...]) -> float:
        counts = self._counts(y, parents)
        q, r = counts.shape
        row_tot = counts.sum(axis=1)
        if self.cfg.score == "bic":
            nz = counts > 0
            ll = float(np.sum(counts[nz] * np.log(counts[nz] / row_tot[:, None].repeat(r, 1)[nz])))
            return ll - 0.5 * math.log(self.n) * (r - 1) * q
        a_row = self.cfg.ess / q
        a_cell = self.cfg.ess / (q * r)
        val = float(
            np.sum(gammaln(a_row) - gammaln(a_row + row_tot))
            + np.sum(gammaln(a_cell + counts) - gammaln(a_cell))
        )
        return val


def _complete_rows(train: Table) -> np.ndarray:
    schema = train.schema
    maps = [
        {v: i for i, v in enumerate(schema.domain(a))} for a in schema.attributes
    ]
    rows = []
    for row in train.rows:
        if any(c is None for c in row.cells):
            continue
        rows.append([m[c] for m, c in zip(maps, row.cells)])
    return np.array(rows, dtype=np.int64).reshape(len(rows), len(schema.attributes))


def _would_cycle(children: Mapping[int, set[int]], x: int, y: int) -> bool:
    # adding edge x -> y closes a cycle iff x is reachable from y
    stack = [y]
    seen = {y}
    while stack:
        node = stack.pop()
        if node == x:
            return True
        for c in children[node]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def _random_start(
    n: int, max_in_degree: int, rng: np.random.Generator
) -> dict[int, set[int]]:
    order = rng.permutation(n)
    parents: dict[int, set[int]] = {i: set() for i in range(n)}
    for pos in range(1, n):
        y = int(order[pos])
        pool = [int(order[j]) for j in range(pos)]
        k = int(rng.integers(0, min(max_in_degree, len(pool)) + 1))
        if k:
            picked = rng.choice(len(pool), size=k, replace=False)
            parents[y] = {pool[int(j)] for j in picked}
    return parents


_TIE_TOL = 1e-9


def _hill_climb(
    start: dict[int, set[int]],
    scores: _LocalScores,
    cfg: StructureSearchConfig,
    deadline: float | None,
) -> tuple[dict[int, set[int]], float]:
    n = len(scores.sizes)
    parents = {y: set(ps) for y, ps in start.items()}
    children: dict[int, set[int]] = {i: set() for i in range(n)}
    for y, ps in parents.items():
        for p in ps:
            children[p].add(y)
    local = {y: scores.local(y, frozenset(parents[y])) for y in range(n)}
    total = sum(local.values())

    for _ in range(cfg.max_iterations):
        if deadline is not None and time.monotonic() > deadline:
            break
        best_delta = 0.0
        best_key: tuple[int, int, int] | None = None
        best_apply: tuple | None = None
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                if x not in parents[y]:
                    # add x -> y
                    if len(parents[y]) < cfg.max_in_degree and not _would_cycle(children, x, y):
                        delta = scores.local(y, frozenset(parents[y] | {x})) - local[y]
                        key = (x, y, 0)
                        if _better(delta, key, best_delta, best_key):
                            best_delta, best_key = delta, key
                            best_apply = ("add", x, y)
                else:
                    # delete x -> y
                    delta = scores.local(y, frozenset(parents[y] - {x})) - local[y]
                    key = (x, y, 1)
                    if _better(delta, key, best_delta, best_key):
                        best_delta, best_key = delta, key
                        best_apply = ("del", x, y)
                    # reverse x -> y
                    if len(parents[x]) < cfg.max_in_degree:
                        children[x].discard(y)  # probe acyclicity without x -> y
                        cycles = _would_cycle(children, y, x)
                        children[x].add(y)
                        if not cycles:
                            delta = (
                                scores.local(y, frozenset(parents[y] - {x}))
                                - local[y]
                                + scores.local(x, frozenset(parents[x] | {y}))
                                - local[x]
                            )
                            key = (x, y, 2)
                            if _better(delta, key, best_delta, best_key):
                                best_delta, best_key = delta, key
                                best_apply = ("rev", x, y)
        if best_apply is None or best_delta <= _TIE_TOL:
            break
        op, x, y = best_apply
        if op == "add":
            parents[y].add(x)
            children[x].add(y)
        elif op == "del":
            parents[y].discard(x)
            children[x].discard(y)
        else:
            parents[y].discard(x)
            children[x].discard(y)
            parents[x].add(y)
            children[y].add(x)
            local[x] = scores.local(x, frozenset(parents[x]))
        local[y] = scores.local(y, frozenset(parents[y]))
        total = sum(local.values())
    return parents, total


def _better(
    delta: float,
    key: tuple[int, int, int],
    best_delta: float,
    best_key: tuple[int, int, int] | None,
) -> bool:
    if best_key is None:
        return delta > _TIE_TOL
    if delta > best_delta + _TIE_TOL:
        return True
    if delta >= best_delta - _TIE_TOL and key < best_key:
        return True
    return False


def learn_structure(train: Table, cfg: StructureSearchConfig | None = None) -> BayesNet:
    """Greedy hill-climbing structure search over the training table.

    Rows containing any null are dropped (with a warning).  Returns a
    BayesNet carrying the learned parent sets and uniform placeholder CPTs;
    follow with :func:`fit_parameters`.

    Raises
    ------
    ValueError
        If more than half the rows contain nulls, or fewer than 2 usable
        rows remain.
    """
    cfg = cfg or StructureSearchConfig()
    schema = train.schema
    data = _complete_rows(train)
    dropped = len(train.rows) - data.shape[0]
    if dropped:
        if dropped > 0.5 * len(train.rows):
            raise ValueError(
                f"{dropped} of {len(train.rows)} training rows contain nulls; "
                "more than half the data is unusable for structure search"
            )
        warnings.warn(f"dropped {dropped} rows with nulls for structure search", stacklevel=2)
    if data.shape[0] < 2:
        raise ValueError("structure search needs at least 2 complete rows")
    sizes = [len(schema.domain(a)) for a in schema.attributes]
    scores = _LocalScores(data, sizes, cfg)
    deadline = None if cfg.time_limit is None else time.monotonic() + cfg.time_limit
    n = len(sizes)

    best_parents: dict[int, set[int]] | None = None
    best_score = -math.inf
    for restart in range(cfg.restarts):
        if restart == 0:
            start: dict[int, set[int]] = {i: set() for i in range(n)}
        else:
            rng = np.random.default_rng([cfg.seed, restart])
            start = _random_start(n, cfg.max_in_degree, rng)
        parents, score = _hill_climb(start, scores, cfg, deadline)
        if best_parents is None or score > best_score + _TIE_TOL:
            best_parents, best_score = parents, score
        if deadline is not None and time.monotonic() > deadline:
            break

    assert best_parents is not None
    attr_of = schema.attributes
    named = {attr_of[y]: tuple(sorted(attr_of[p] for p in ps)) for y, ps in best_parents.items()}
    return BayesNet(schema, named, uniform_cpts(schema, named))


def fit_parameters(structure: BayesNet, train: Table, pseudo_count: float = 1.0) -> BayesNet:
    """Estimate CPTs by Laplace-smoothed counting.

    Each CPT uses the training rows that are null-free on the attribute and
    its parents; other rows are skipped per-CPT, not dropped globally.  A
    parent combination never observed yields a uniform row.  With
    pseudo_count > 0 every probability is strictly positive.
    """
    if pseudo_count < 0:
        raise ValueError("pseudo_count must be >= 0")
    schema = structure.schema
    if train.schema != schema:
        raise ValueError("training table schema does not match the network")
    cpts = {}
    for attr in schema.attributes:
        ps = structure.parents[attr]
        dom = schema.domain(attr)
        r = len(dom)
        shape = tuple(len(schema.domain(p)) for p in ps) + (r,)
        counts = np.zeros(shape, dtype=float)
        cols = [schema.index(p) for p in ps] + [schema.index(attr)]
        maps = [
            {v: i for i, v in enumerate(schema.domain(a))} for a in list(ps) + [attr]
        ]
        for row in train.rows:
            vals = [row.cells[c] for c in cols]
            if any(v is None for v in vals):
                continue
            counts[tuple(m[v] for m, v in zip(maps, vals))] += 1.0
        smoothed = counts + pseudo_count
        totals = smoothed.sum(axis=-1, keepdims=True)
        zero = totals[..., 0] == 0  # only possible with pseudo_count == 0
        if np.any(zero):
            smoothed[zero] = 1.0
            totals = smoothed.sum(axis=-1, keepdims=True)
        cpts[attr] = smoothed / totals
    return BayesNet(schema, structure.parents, cpts)


# ---------------------------------------------------------------------------
# graph queries


def markov_blanket(net: BayesNet, attr: str) -> frozenset[str]:
    """Parents, children, and the children's other parents of ``attr``."""
    net.schema.index(attr)
    out: set[str] = set(net.parents[attr])
    for child in net.children(attr):
        out.add(child)
        out.update(net.parents[child])
    out.discard(attr)
    return frozenset(out)


def d_separated(net: BayesNet, x: str, y: str, given: Iterable[str] = ()) -> bool:
    """True iff every path between ``x`` and ``y`` is blocked by ``given``.

    Implemented as reachability of the ball-passing kind: the set of nodes
    reachable from ``x`` via active trails is computed in two phases
    (ancestors of the conditioning set, then a directed BFS over
    (node, direction) states).
    """
    net.schema.index(x)
    net.schema.index(y)
    z = set(given)
    for g in z:
        net.schema.index(g)
    if x == y:
        raise ValueError("x and y must differ")
    if x in z or y in z:
        raise ValueError("conditioning set must not contain x or y")

    ancestors: set[str] = set()
    stack = list(z)
    while stack:
        node = stack.pop()
        if node in ancestors:
            continue
        ancestors.add(node)
        stack.extend(net.parents[node])

    UP, DOWN = 0, 1
    visited: set[tuple[str, int]] = set()
    frontier: list[tuple[str, int]] = [(x, UP)]
    reachable: set[str] = set()
    while frontier:
        node, direction = frontier.pop()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in z:
            reachable.add(node)
        if direction == UP and node not in z:
            for p in net.parents[node]:
                frontier.append((p, UP))
            for c in net.children(node):
                frontier.append((c, DOWN))
        elif direction == DOWN:
            if node not in z:
                for c in net.children(node):
                    frontier.append((c, DOWN))
            if node in ancestors:
                for p in net.parents[node]:
                    frontier.append((p, UP))
    return y not in reachable


# ---------------------------------------------------------------------------
# serialization

_FORMAT_NAME = "nullbayes-model"
_FORMAT_VERSION = "1"
_LOAD_ROW_SUM_TOL = 1e-6


def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(token: str) -> str:
    out = []
    i = 0
    while i < len(token):
        ch = token[i]
        if ch == "\\" and i + 1 < len(token):
            nxt = token[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def save_model(net: BayesNet) -> str:
    """Serialize to versioned, line-oriented, tab-separated text.

    Attributes, domains, parent lists, and CPT rows are emitted in sorted /
    domain-index order; probabilities carry 12 significant digits, so the
    text is byte-stable under a save -> load -> save round trip.
    """
    lines = [f"{_FORMAT_NAME}\t{_FORMAT_VERSION}"]
    for attr in net.schema.attributes:
        doms = "\t".join(_escape(v) for v in net.schema.domain(attr))
        lines.append(f"attribute\t{_escape(attr)}\t{doms}")
    for attr in net.schema.attributes:
        ps = "\t".join(_escape(p) for p in net.parents[attr])
        lines.append(f"parents\t{_escape(attr)}" + (f"\t{ps}" if ps else ""))
    for attr in net.schema.attributes:
        cpt = net.cpts[attr]
        parent_doms = [net.schema.domain(p) for p in net.parents[attr]]
        rows = cpt.reshape(-1, cpt.shape[-1])
        for flat, row in enumerate(rows):
            combo = []
            rem = flat
            for size in reversed([len(d) for d in parent_doms]):
                combo.append(rem % size)
                rem //= size
            combo.reverse()
            labels = [parent_doms[i][j] for i, j in enumerate(combo)]
            head = "\t".join([_escape(attr)] + [_escape(v) for v in labels])
            body = "\t".join(f"{p:.11e}" for p in row)
            lines.append(f"cpt\t{head}\t{body}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def load_model(text: str) -> BayesNet:
    """Parse text produced by :func:`save_model`.

    Raises
    ------
    ModelFormatError
        On an unknown version, malformed lines, missing CPT rows, rows that
        do not sum to 1 within 1e-6, or a cyclic parent graph.
    """
    lines = text.splitlines()
    if not lines:
        raise ModelFormatError("empty model text")
    head = lines[0].split("\t")
    if len(head) != 2 or head[0] != _FORMAT_NAME:
        raise ModelFormatError("not a model file")
    if head[1] != _FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {head[1]!r}")
    attrs: list[str] = []
    domains: dict[str, tuple[str, ...]] = {}
    parents: dict[str, tuple[str, ...]] = {}
    cpt_rows: dict[str, dict[tuple[str, ...], list[float]]] = {}
    ended = False
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if ended:
            raise ModelFormatError(f"line {lineno}: content after end marker")
        parts = line.split("\t")
        kind = parts[0]
        if kind == "attribute":
            if len(parts) < 3:
                raise ModelFormatError(f"line {lineno}: attribute needs a domain")
            name = _unescape(parts[1])
            attrs.append(name)
            domains[name] = tuple(_unescape(t) for t in parts[2:])
        elif kind == "parents":
            if len(parts) < 2:
                raise ModelFormatError(f"line {lineno}: malformed parents line")
            name = _unescape(parts[1])
            parents[name] = tuple(_unescape(t) for t in parts[2:])
        elif kind == "cpt":
            if len(parts) < 3:
                raise ModelFormatError(f"line {lineno}: malformed cpt line")
            name = _unescape(parts[1])
            if name not in parents:
                raise ModelFormatError(f"line {lineno}: cpt before parents for {name!r}")
            k = len(parents[name])
            combo = tuple(_unescape(t) for t in parts[2 : 2 + k])
            try:
                probs = [float(t) for t in parts[2 + k :]]
            except ValueError:
                raise ModelFormatError(f"line {lineno}: bad probability") from None
            cpt_rows.setdefault(name, {})[combo] = probs
        elif kind == "end":
            ended = True
        else:
            raise ModelFormatError(f"line {lineno}: unknown record {kind!r}")
    if not ended:
        raise ModelFormatError("missing end marker")
    if not attrs:
        raise ModelFormatError("model defines no attributes")
    try:
        schema = Schema(attrs, domains)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    cpts: dict[str, np.ndarray] = {}
    for attr in attrs:
        if attr not in parents:
            raise ModelFormatError(f"no parents record for {attr!r}")
        ps = parents[attr]
        parent_doms = []
        for p in ps:
            if p not in domains:
                raise ModelFormatError(f"unknown parent {p!r} of {attr!r}")
            parent_doms.append(schema.domain(p))
        dom = schema.domain(attr)
        shape = tuple(len(d) for d in parent_doms) + (len(dom),)
        arr = np.zeros(shape)
        rows = cpt_rows.get(attr, {})
        expected = int(np.prod(shape[:-1], dtype=np.int64)) if ps else 1
        if len(rows) != expected:
            raise ModelFormatError(
                f"{attr!r}: expected {expected} cpt rows, found {len(rows)}"
            )
        for combo, probs in rows.items():
            if len(probs) != len(dom):
                raise ModelFormatError(f"{attr!r}: cpt row has {len(probs)} entries")
            if abs(sum(probs) - 1.0) > _LOAD_ROW_SUM_TOL:
                raise ModelFormatError(f"{attr!r}: cpt row does not sum to 1")
            try:
                idx = tuple(parent_doms[i].index(v) for i, v in enumerate(combo))
            except ValueError:
                raise ModelFormatError(f"{attr!r}: unknown parent value in cpt row") from None
            row = np.array(probs)
            total = row.sum()
            if abs(total - 1.0) > _ROW_SUM_TOL:
                row = row / total  # within load tolerance but not save precision
            arr[idx] = row
        cpts[attr] = arr
    try:
        return BayesNet(schema, parents, cpts)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# sampling


def sample_rows(
    net: BayesNet, n: int, seed: int | Sequence[int], start_id: int = 1
) -> Table:
    """Draw ``n`` complete rows by ancestral sampling.  Deterministic per seed."""
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(seed)
    schema = net.schema
    order = net.topological_order()
    pos = {a: schema.index(a) for a in schema.attributes}
    rows = []
    for i in range(n):
        cells: list[str | None] = [None] * len(schema.attributes)
        drawn: dict[str, int] = {}
        for attr in order:
            idx = tuple(drawn[p] for p in net.parents[attr])
            weights = net.cpts[attr][idx]
            cum = np.cumsum(weights)
            j = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
            j = min(j, len(weights) - 1)
            drawn[attr] = j
            cells[pos[attr]] = schema.domain(attr)[j]
        rows.append(Row(start_id + i, tuple(cells)))
    return Table(schema, rows)
