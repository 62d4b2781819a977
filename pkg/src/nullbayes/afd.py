"""Approximate functional dependencies and the classifier built on them.

An AFD ``X -> A`` holds with the confidence that a tuple's A-value equals
the majority A-value of its X-group: the number of tuples kept by keeping
only each group's majority class, over the number of tuples with X and A
non-null.  Value distributions for prediction come from a naive Bayes model
over the determining set.  Prediction of a missing attribute chains through
other AFDs when determining values are themselves missing; a chain that
bites its own tail makes the attribute unpredictable.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .tabular import Row, Schema, Table

__all__ = [
    "Afd",
    "NoRuleError",
    "NotApplicableError",
    "mine_afds",
    "best_afds",
    "NaiveBayesModel",
    "fit_naive_bayes",
    "afd_impute_tuple",
    "afd_to_line",
    "afd_from_line",
    "save_afds",
    "load_afds",
]


class NoRuleError(LookupError):
    """No AFD is available for the requested attribute."""


class NotApplicableError(ValueError):
    """The rewriting strategy's applicability condition fails."""


@dataclass(frozen=True)
class Afd:
    """``determining -> target`` with its confidence in [0, 1]."""

    determining: tuple[str, ...]
    target: str
    confidence: float

    def __post_init__(self) -> None:
        if not self.determining:
            raise ValueError("empty determining set")
        if tuple(sorted(self.determining)) != self.determining:
            raise ValueError("determining set must be sorted")
        if self.target in self.determining:
            raise ValueError("target inside its own determining set")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence outside [0, 1]")


def mine_afds(
    train: Table, max_lhs: int = 2, min_confidence: float = 0.0
) -> list[Afd]:
    """Mine AFDs with determining sets of size 1..max_lhs for every target.

    Confidence for X -> A is computed over rows null-free on X and A; a
    candidate with no such rows is skipped.  Results are sorted by target,
    then determining-set size, then determining set.
    """
    if max_lhs < 1:
        raise ValueError("max_lhs must be >= 1")
    attrs = train.schema.attributes
    out: list[Afd] = []
    for target in attrs:
        others = [a for a in attrs if a != target]
        for size in range(1, max_lhs + 1):
            for det in itertools.combinations(sorted(others), size):
                conf = _confidence(train, det, target)
                if conf is None or conf < min_confidence:
                    continue
                out.append(Afd(det, target, conf))
    out.sort(key=lambda r: (r.target, len(r.determining), r.determining))
    return out


def _confidence(train: Table, det: tuple[str, ...], target: str) -> float | None:
    idx = [train.schema.index(a) for a in det]
    t_idx = train.schema.index(target)
    groups: dict[tuple[str, ...], Counter] = {}
    total = 0
    for row in train.rows:
        key = tuple(row.cells[i] for i in idx)
        t_val = row.cells[t_idx]
        if t_val is None or any(v is None for v in key):
            continue
        total += 1
        groups.setdefault(key, Counter())[t_val] += 1
    if total == 0:
        return None
    kept = sum(max(counter.values()) for counter in groups.values())
    return kept / total


def best_afds(afds: Iterable[Afd], exclude: Iterable[str] = ()) -> dict[str, Afd]:
    """The strongest usable AFD per target attribute.

    AFDs whose determining set touches ``exclude`` are skipped.  Ties go to
    the smaller determining set, then the lexicographically smaller one.
    """
    banned = set(exclude)
    best: dict[str, Afd] = {}
    for afd in afds:
        if banned.intersection(afd.determining):
            continue
        cur = best.get(afd.target)
        if cur is None or _afd_rank(afd) < _afd_rank(cur):
            best[afd.target] = afd
    return best


def _afd_rank(afd: Afd) -> tuple[float, int, tuple[str, ...]]:
    return (-afd.confidence, len(afd.determining), afd.determining)


# ---------------------------------------------------------------------------
# naive Bayes value distributions


class NaiveBayesModel:
    """Laplace-smoothed naive Bayes over every (feature, target) attribute pair.

    For a target A with evidence x over features X the model scores
    P(a) * prod_i P(x_i | a), normalized over dom(A).  Counts for the pair
    (X_i, A) use the training rows null-free on both attributes.
    """

    def __init__(self, schema: Schema, class_counts, pair_counts):
        self.schema = schema
        self._class_counts = class_counts  # attr -> ndarray over dom(attr)
        self._pair_counts = pair_counts  # (feature, target) -> ndarray (|feat|, |tgt|)

    def posterior(self, target: str, evidence: Mapping[str, str]) -> np.ndarray:
        """P(target | evidence) as an array over the target's sorted domain."""
        dom = self.schema.domain(target)
        counts = self._class_counts[target]
        probs = (counts + 1.0) / (counts.sum() + len(dom))
        for attr, value in sorted(evidence.items()):
            if attr == target:
                raise ValueError(f"evidence on the target attribute {target!r}")
            fdom = self.schema.domain(attr)
            if value not in fdom:
                raise ValueError(f"value {value!r} not in domain of {attr!r}")
            pair = self._pair_counts[(attr, target)]
            col = pair[fdom.index(value), :]
            per_class = pair.sum(axis=0)
            probs = probs * (col + 1.0) / (per_class + len(fdom))
        total = probs.sum()
        return probs / total

    def predict(self, target: str, evidence: Mapping[str, str]) -> tuple[str, float]:
        """Most probable target value and its probability; ties go lexicographic."""
        probs = self.posterior(target, evidence)
        i = int(np.argmax(probs))
        return self.schema.domain(target)[i], float(probs[i])


def fit_naive_bayes(train: Table) -> NaiveBayesModel:
    schema = train.schema
    index = {a: schema.index(a) for a in schema.attributes}
    doms = {a: {v: i for i, v in enumerate(schema.domain(a))} for a in schema.attributes}
    class_counts = {
        a: np.zeros(len(schema.domain(a))) for a in schema.attributes
    }
    pair_counts = {
        (f, t): np.zeros((len(schema.domain(f)), len(schema.domain(t))))
        for f in schema.attributes
        for t in schema.attributes
        if f != t
    }
    for row in train.rows:
        for a in schema.attributes:
            v = row.cells[index[a]]
            if v is not None:
                class_counts[a][doms[a][v]] += 1.0
        for (f, t), arr in pair_counts.items():
            fv = row.cells[index[f]]
            tv = row.cells[index[t]]
            if fv is not None and tv is not None:
                arr[doms[f][fv], doms[t][tv]] += 1.0
    return NaiveBayesModel(schema, class_counts, pair_counts)


# ---------------------------------------------------------------------------
# imputation by chained AFD prediction


def afd_impute_tuple(
    afds: Sequence[Afd], model: NaiveBayesModel, row: Row
) -> tuple[Row, list[str]]:
    """Fill a row's missing cells from each attribute's best AFD.

    A missing determining value is predicted through that attribute's own
    best AFD, recursively.  A chain that revisits any attribute already on
    the path (the original target included) stops: that attribute is
    unpredictable and its cell stays null.  Returns the completed row and
    the sorted list of unpredictable attributes.

    Termination: the path only grows, so depth is bounded by the number of
    attributes.
    """
    schema = model.schema
    best = best_afds(afds)
    cells = dict(zip(schema.attributes, row.cells))

    def predict(attr: str, path: frozenset[str]) -> str | None:
        if attr in path:
            return None
        afd = best.get(attr)
        if afd is None:
            return None
        path = path | {attr}
        evidence: dict[str, str] = {}
        for det in afd.determining:
            value = cells[det]
            if value is None:
                value = predict(det, path)
                if value is None:
                    return None
            evidence[det] = value
        return model.predict(attr, evidence)[0]

    unpredictable: list[str] = []
    filled: dict[str, str] = {}
    for attr in schema.attributes:
        if cells[attr] is not None:
            continue
        value = predict(attr, frozenset())
        if value is None:
            unpredictable.append(attr)
        else:
            filled[attr] = value
    new_cells = tuple(
        filled.get(a, cells[a]) for a in schema.attributes
    )
    return Row(row.id, new_cells), sorted(unpredictable)


# ---------------------------------------------------------------------------
# serialization

_ARROW = " -> "
_COLON = " : "


def afd_to_line(afd: Afd) -> str:
    return f"{','.join(afd.determining)}{_ARROW}{afd.target}{_COLON}{afd.confidence:.12g}"


def afd_from_line(line: str) -> Afd:
    try:
        lhs, rest = line.split("->", 1)
        target, conf = rest.rsplit(":", 1)
        det = tuple(sorted(p.strip() for p in lhs.split(",")))
        return Afd(det, target.strip(), float(conf.strip()))
    except (ValueError, TypeError):
        raise ValueError(f"malformed AFD line {line!r}") from None


def save_afds(afds: Iterable[Afd]) -> str:
    return "".join(afd_to_line(a) + "\n" for a in afds)


def load_afds(text: str) -> list[Afd]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            out.append(afd_from_line(line))
    return out
