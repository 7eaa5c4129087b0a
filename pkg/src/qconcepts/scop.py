"""State-context-property description of a single concept.

A concept carries a finite set of states (one of them the ground state, i.e.
the prototype), a finite set of contexts and a finite set of properties.
``transition[(q, e, p)]`` is the probability that state ``p`` changes to ``q``
under context ``e``; ``applicability[(p, a)]`` is the weight of property ``a``
in state ``p``. Missing table entries read as zero. A unit context
(``UNIT_CONTEXT``) that leaves every state fixed is always present.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, LookupFailure

UNIT_CONTEXT = "unit"
ROW_TOL = 1e-12


def prototype_distance(item: Sequence[float], prototype: Sequence[float]) -> float:
    """Euclidean distance between an item's feature weights and the prototype's."""
    x = np.asarray(item, dtype=float)
    p = np.asarray(prototype, dtype=float)
    if x.shape != p.shape:
        raise DomainError(f"feature vectors differ in length: {x.shape[0]} vs {p.shape[0]}")
    # hypot rescales internally, so tiny differences do not underflow to zero
    return math.hypot(*(x - p).tolist())


@dataclass(frozen=True)
class ScopConcept:
    states: tuple[str, ...]
    contexts: tuple[str, ...]
    properties: tuple[str, ...]
    ground_state: str
    transition: Mapping[tuple[str, str, str], float] = field(default_factory=dict)
    applicability: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        states = tuple(self.states)
        contexts = tuple(self.contexts)
        if UNIT_CONTEXT not in contexts:
            contexts = (UNIT_CONTEXT,) + contexts
        trans = {tuple(k): float(v) for k, v in self.transition.items()}
        for p in states:
            for q in states:
                key = (q, UNIT_CONTEXT, p)
                given = trans.get(key)
                identity = 1.0 if q == p else 0.0
                if given is not None and given != identity:
                    raise DomainError(f"unit context must leave states fixed; got mu{key}={given}")
                trans[key] = identity
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "contexts", contexts)
        object.__setattr__(self, "properties", tuple(self.properties))
        object.__setattr__(self, "transition", trans)
        object.__setattr__(self, "applicability", {tuple(k): float(v) for k, v in self.applicability.items()})
        self._validate()

    def _validate(self):
        for name, members in (("states", self.states), ("contexts", self.contexts), ("properties", self.properties)):
            if len(set(members)) != len(members):
                raise DomainError(f"duplicate identifiers in {name}")
        if self.ground_state not in self.states:
            raise DomainError(f"ground state {self.ground_state!r} is not among the states")
        for (q, e, p), value in self.transition.items():
            self._require(q=q, e=e, p=p)
            if not (0.0 <= value <= 1.0):
                raise DomainError(f"mu({q}, {e}, {p}) = {value} outside [0, 1]")
        for e in self.contexts:
            for p in self.states:
                total = math.fsum(self.transition.get((q, e, p), 0.0) for q in self.states)
                if abs(total - 1.0) > ROW_TOL:
                    raise DomainError(f"transition row (context={e!r}, from={p!r}) sums to {total!r}, not 1")
        for (p, a), value in self.applicability.items():
            self._require(p=p, a=a)
            if not (0.0 <= value <= 1.0):
                raise DomainError(f"nu({p}, {a}) = {value} outside [0, 1]")

    def _require(self, q=None, e=None, p=None, a=None):
        for ident, pool, kind in ((q, self.states, "state"), (p, self.states, "state"),
                                  (e, self.contexts, "context"), (a, self.properties, "property")):
            if ident is not None and ident not in pool:
                raise LookupFailure(f"unknown {kind} {ident!r}")

    def transition_probability(self, q: str, e: str, p: str) -> float:
        self._require(q=q, e=e, p=p)
        return self.transition.get((q, e, p), 0.0)

    def applicability_of(self, p: str, a: str) -> float:
        self._require(p=p, a=a)
        return self.applicability.get((p, a), 0.0)

    def to_json(self) -> str:
        obj = {
            "states": list(self.states),
            "ground_state": self.ground_state,
            "contexts": [e for e in self.contexts if e != UNIT_CONTEXT],
            "properties": list(self.properties),
            "transition": [
                {"to": q, "context": e, "from": p, "probability": v}
                for (q, e, p), v in sorted(self.transition.items())
                if e != UNIT_CONTEXT
            ],
            "applicability": [
                {"state": p, "property": a, "weight": v}
                for (p, a), v in sorted(self.applicability.items())
            ],
        }
        return json.dumps(obj, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ScopConcept":
        obj = json.loads(text)
        try:
            return cls(
                states=obj["states"],
                contexts=obj.get("contexts", []),
                properties=obj.get("properties", []),
                ground_state=obj["ground_state"],
                transition={(t["to"], t["context"], t["from"]): t["probability"] for t in obj.get("transition", [])},
                applicability={(r["state"], r["property"]): r["weight"] for r in obj.get("applicability", [])},
            )
        except KeyError as exc:
            raise DomainError(f"SCoP JSON is missing field {exc}") from None


def transition_probability(c: ScopConcept, q: str, e: str, p: str) -> float:
    return c.transition_probability(q, e, p)


def applicability(c: ScopConcept, p: str, a: str) -> float:
    return c.applicability_of(p, a)
