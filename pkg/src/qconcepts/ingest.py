"""Membership-table ingestion.

Tables hold per-item collapse probabilities for two concepts ``A``, ``B`` and
their disjunction. CSV is the canonical interchange::

    # concept_a: Fruits
    # concept_b: Vegetables
    index,label,mu_a,mu_b,mu_ab
    1,Almond,0.0359,0.0133,0.0269

The ``# concept_*`` comment lines are optional. JSON mirrors the same content
as ``{"concept_a": ..., "concept_b": ..., "items": [{index, label, mu_a, mu_b, mu_ab}]}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError

CSV_HEADER = ("index", "label", "mu_a", "mu_b", "mu_ab")
COLUMNS = ("mu_a", "mu_b", "mu_ab")
# A column is treated as normalized when its exact sum is this close to 1.
_NORMALIZED_SLACK = 1e-14

BUNDLED_CORPUS = "hampton_fruits_vegetables.csv"


@dataclass(frozen=True)
class ItemRecord:
    index: int
    label: str
    mu_a: float
    mu_b: float
    mu_ab: float

    def __post_init__(self):
        if self.index < 1:
            raise DomainError(f"item index must be positive, got {self.index}")
        for name in COLUMNS:
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise DomainError(f"item {self.label!r}: {name}={value!r} outside [0, 1]")


@dataclass(frozen=True)
class ConceptPairData:
    concept_a: str
    concept_b: str
    items: tuple[ItemRecord, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise DomainError("no items")
        seen = set()
        for item in self.items:
            if item.index in seen:
                raise DomainError(f"duplicate item index {item.index}")
            seen.add(item.index)

    def __len__(self):
        return len(self.items)

    @property
    def labels(self) -> list[str]:
        return [it.label for it in self.items]

    def column(self, name: str) -> np.ndarray:
        if name not in COLUMNS:
            raise KeyError(name)
        return np.array([getattr(it, name) for it in self.items], dtype=float)

    @property
    def mu_a(self) -> np.ndarray:
        return self.column("mu_a")

    @property
    def mu_b(self) -> np.ndarray:
        return self.column("mu_b")

    @property
    def mu_ab(self) -> np.ndarray:
        return self.column("mu_ab")

    def with_columns(self, mu_a=None, mu_b=None, mu_ab=None) -> "ConceptPairData":
        cols = {"mu_a": mu_a, "mu_b": mu_b, "mu_ab": mu_ab}
        items = []
        for k, it in enumerate(self.items):
            updates = {name: float(vals[k]) for name, vals in cols.items() if vals is not None}
            items.append(replace(it, **updates))
        return replace(self, items=tuple(items))


@dataclass(frozen=True)
class LikertTable:
    """Raw membership degrees in {-3, ..., 3}, one list per measured concept."""

    labels: tuple[str, ...]
    degrees_a: tuple[int, ...]
    degrees_b: tuple[int, ...]
    degrees_ab: tuple[int, ...]
    concept_a: str = "A"
    concept_b: str = "B"

    def __post_init__(self):
        n = len(self.labels)
        for col in (self.degrees_a, self.degrees_b, self.degrees_ab):
            if len(col) != n:
                raise DomainError("Likert columns must have one degree per label")
            _check_degrees(col)

    def to_concept_pair(self) -> ConceptPairData:
        pa = likert_to_collapse_probabilities(self.degrees_a)
        pb = likert_to_collapse_probabilities(self.degrees_b)
        pab = likert_to_collapse_probabilities(self.degrees_ab)
        items = [
            ItemRecord(k + 1, label, pa[k], pb[k], pab[k])
            for k, label in enumerate(self.labels)
        ]
        return ConceptPairData(self.concept_a, self.concept_b, tuple(items))


def _check_degrees(ratings: Iterable[int]) -> None:
    for r in ratings:
        if int(r) != r or not (-3 <= r <= 3):
            raise DomainError(f"Likert degree {r!r} outside the integer range [-3, 3]")


def likert_to_collapse_probabilities(ratings: Sequence[int]) -> list[float]:
    """Shift degrees by +3 and normalize by their total."""
    ratings = list(ratings)
    if not ratings:
        raise DomainError("no ratings")
    _check_degrees(ratings)
    shifted = [int(r) + 3 for r in ratings]
    total = sum(shifted)
    if total == 0:
        raise DomainError("all ratings are -3; shifted degrees sum to zero")
    return [s / total for s in shifted]


def renormalize_column(values: Sequence[float]) -> np.ndarray:
    """Divide by the column sum. Idempotent: already-normalized columns are returned unchanged."""
    values = np.asarray(values, dtype=float)
    total = math.fsum(values)
    if total <= 0.0:
        raise DomainError("column sums to zero; cannot renormalize")
    if abs(total - 1.0) <= _NORMALIZED_SLACK:
        return values.copy()
    return values / total


def renormalize(data: ConceptPairData) -> ConceptPairData:
    return data.with_columns(**{name: renormalize_column(data.column(name)) for name in COLUMNS})


def _parse_float(text: str, line: int, name: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{name}: cannot parse {text!r} as a number", line) from None
    if not math.isfinite(value):
        raise ParseError(f"{name}: non-finite value {text!r}", line)
    return value


def _make_item(index, label, mu_a, mu_b, mu_ab, line) -> ItemRecord:
    for name, value in zip(COLUMNS, (mu_a, mu_b, mu_ab)):
        if not (0.0 <= value <= 1.0):
            raise DomainError(f"line {line}: {name}={value!r} outside [0, 1] for item {label!r}")
    try:
        return ItemRecord(index, label, mu_a, mu_b, mu_ab)
    except DomainError as exc:
        raise DomainError(f"line {line}: {exc}") from None


def _parse_csv(text: str):
    concepts = {"concept_a": "A", "concept_b": "B"}
    lines = text.splitlines()
    rows = []
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        if raw.startswith("#"):
            key, sep, value = raw[1:].partition(":")
            if sep and key.strip() in concepts:
                concepts[key.strip()] = value.strip()
            continue
        fields = next(csv.reader([raw]))
        if not header_seen:
            if tuple(f.strip() for f in fields) != CSV_HEADER:
                raise ParseError(f"expected header {','.join(CSV_HEADER)!r}, got {raw!r}", lineno)
            header_seen = True
            continue
        if len(fields) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} fields, got {len(fields)}", lineno)
        try:
            index = int(fields[0])
        except ValueError:
            raise ParseError(f"index: cannot parse {fields[0]!r} as an integer", lineno) from None
        values = [_parse_float(fields[i], lineno, CSV_HEADER[i]) for i in (2, 3, 4)]
        rows.append(_make_item(index, fields[1], *values, lineno))
    if not header_seen:
        raise DomainError("no items")
    return concepts["concept_a"], concepts["concept_b"], rows


def _parse_json(text: str):
    try:
        obj = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    rows = []
    for pos, entry in enumerate(obj.get("items", []), start=1):
        try:
            index = int(entry["index"])
            label = str(entry["label"])
            values = [float(entry[name]) for name in COLUMNS]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"item #{pos}: malformed entry ({exc})") from None
        rows.append(_make_item(index, label, *values, f"item #{pos}"))
    return obj.get("concept_a", "A"), obj.get("concept_b", "B"), rows


def parse_probability_table(text: str, format: str = "csv", *, renormalize_columns: bool = True) -> ConceptPairData:
    """Parse a membership table and (by default) renormalize every column to unit sum."""
    if format == "csv":
        concept_a, concept_b, rows = _parse_csv(text)
    elif format == "json":
        concept_a, concept_b, rows = _parse_json(text)
    else:
        raise ValueError(f"unknown format {format!r}")
    if not rows:
        raise DomainError("no items")
    data = ConceptPairData(concept_a, concept_b, tuple(rows))
    return renormalize(data) if renormalize_columns else data


def load_probability_table(path, *, renormalize_columns: bool = True) -> ConceptPairData:
    path = str(path)
    fmt = "json" if path.lower().endswith(".json") else "csv"
    with open(path, encoding="utf-8") as fh:
        return parse_probability_table(fh.read(), fmt, renormalize_columns=renormalize_columns)


def load_bundled_corpus(*, renormalize_columns: bool = True) -> ConceptPairData:
    text = resources.files("qconcepts").joinpath("data", BUNDLED_CORPUS).read_text(encoding="utf-8")
    return parse_probability_table(text, "csv", renormalize_columns=renormalize_columns)


def serialize_csv(data: ConceptPairData) -> str:
    buf = io.StringIO()
    buf.write(f"# concept_a: {data.concept_a}\n# concept_b: {data.concept_b}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for it in data.items:
        writer.writerow([it.index, it.label, repr(it.mu_a), repr(it.mu_b), repr(it.mu_ab)])
    return buf.getvalue()


def serialize_json(data: ConceptPairData) -> str:
    obj = {
        "concept_a": data.concept_a,
        "concept_b": data.concept_b,
        "items": [
            {"index": it.index, "label": it.label, "mu_a": it.mu_a, "mu_b": it.mu_b, "mu_ab": it.mu_ab}
            for it in data.items
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


@dataclass(frozen=True)
class Violation:
    column: str
    message: str
    item: int | None = None


def validate_normalization(data: ConceptPairData, tol: float = 1e-9) -> list[Violation]:
    """Report column sums off unity by more than ``tol`` and entries outside [0, 1]."""
    report = []
    for name in COLUMNS:
        col = data.column(name)
        for it, value in zip(data.items, col):
            if not (0.0 <= value <= 1.0):
                report.append(Violation(name, f"{it.label}: {value!r} outside [0, 1]", it.index))
        total = math.fsum(col)
        if abs(total - 1.0) > tol:
            report.append(Violation(name, f"column sums to {total:.12g}, off by {total - 1.0:+.3g}"))
    return report
