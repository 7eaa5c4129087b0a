"""Classical vs. quantum predictions for conjunction/negation membership data.

For concepts A, B and their negations A', B', classical probability forces the
four conjunction weights of an item to partition unit mass, so
``I = 1 - mu(AB) - mu(AB') - mu(A'B) - mu(A'B')`` vanishes. Data fluctuate
around ``I = -0.81`` instead, which turns into the quantum prediction
``mu(A'B') = 1.81 - mu(AB) - mu(AB') - mu(A'B)``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .errors import DomainError, ParseError

QUANTUM_OFFSET = 1.81
CSV_HEADER = ("label", "mu_ab", "mu_ab_notb", "mu_nota_b", "mu_nota_notb")


@dataclass(frozen=True)
class ConjunctionNegationRecord:
    label: str
    mu_ab: float
    mu_ab_notb: float
    mu_nota_b: float
    mu_nota_notb: float | None = None  # None when not measured

    def __post_init__(self):
        for name in CSV_HEADER[1:]:
            value = getattr(self, name)
            if value is None and name == "mu_nota_notb":
                continue
            if not (0.0 <= value <= 1.0):
                raise DomainError(f"{self.label!r}: {name}={value!r} outside [0, 1]")


@dataclass(frozen=True)
class Prediction:
    value: float

    @property
    def out_of_range(self) -> bool:
        return not (0.0 <= self.value <= 1.0)


def kolmogorov_factor(r: ConjunctionNegationRecord) -> float:
    if r.mu_nota_notb is None:
        raise DomainError(f"{r.label!r}: mu(A' and B') not measured")
    return 1.0 - r.mu_ab - r.mu_ab_notb - r.mu_nota_b - r.mu_nota_notb


def classical_prediction(mu_ab: float, mu_ab_notb: float, mu_nota_b: float) -> Prediction:
    return Prediction(1.0 - mu_ab - mu_ab_notb - mu_nota_b)


def quantum_prediction(mu_ab: float, mu_ab_notb: float, mu_nota_b: float, offset: float = QUANTUM_OFFSET) -> Prediction:
    """Unclamped; check ``out_of_range`` on the result."""
    return Prediction(offset - mu_ab - mu_ab_notb - mu_nota_b)


def parse_records(text: str) -> list[ConjunctionNegationRecord]:
    reader = csv.reader(io.StringIO(text))
    records = []
    header_seen = False
    for lineno, fields in enumerate(reader, start=1):
        if not fields or all(not f.strip() for f in fields) or fields[0].startswith("#"):
            continue
        if not header_seen:
            if tuple(f.strip() for f in fields) != CSV_HEADER:
                raise ParseError(f"expected header {','.join(CSV_HEADER)!r}", lineno)
            header_seen = True
            continue
        if len(fields) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} fields, got {len(fields)}", lineno)
        try:
            values = [float(f) for f in fields[1:4]]
            values.append(float(fields[4]) if fields[4].strip() else None)
        except ValueError:
            raise ParseError("non-numeric membership value", lineno) from None
        try:
            records.append(ConjunctionNegationRecord(fields[0], *values))
        except DomainError as exc:
            raise DomainError(f"line {lineno}: {exc}") from None
    if not records:
        raise DomainError("no items")
    return records


def _r6(x: float) -> float:
    return float(f"{x:.6g}")


def prediction_report(records, offset: float = QUANTUM_OFFSET) -> dict:
    rows = []
    for r in records:
        cl = classical_prediction(r.mu_ab, r.mu_ab_notb, r.mu_nota_b)
        qu = quantum_prediction(r.mu_ab, r.mu_ab_notb, r.mu_nota_b, offset)
        observed = r.mu_nota_notb
        rows.append({
            "label": r.label,
            "I": None if observed is None else _r6(kolmogorov_factor(r)),
            "observed_nota_notb": None if observed is None else _r6(observed),
            "classical": _r6(cl.value),
            "classical_out_of_range": cl.out_of_range,
            "quantum": _r6(qu.value),
            "quantum_out_of_range": qu.out_of_range,
            "deviation_classical": None if observed is None else _r6(observed - cl.value),
            "deviation_quantum": None if observed is None else _r6(observed - qu.value),
        })
    measured = [kolmogorov_factor(r) for r in records if r.mu_nota_notb is not None]
    mean_i = _r6(sum(measured) / len(measured)) if measured else None
    return {"offset": offset, "mean_I": mean_i, "items": rows}


def prediction_report_json(records, offset: float = QUANTUM_OFFSET) -> str:
    return json.dumps(prediction_report(records, offset), indent=2) + "\n"
