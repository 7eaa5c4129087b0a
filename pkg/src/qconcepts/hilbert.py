"""Complex Hilbert-space model of two concepts and their disjunction.

Concepts ``A`` and ``B`` are orthogonal unit vectors; the disjunction is the
equal-weight superposition ``(|A> + |B>)/sqrt(2)``. Each item ``k`` owns a
projector ``M_k``; the model is pinned down by the three collapse probabilities
per item, which fix ``|phi_k|`` through the interference term. The phase signs
are chosen greedily (largest ``lambda`` first) so that the sine part of
``<A|B>`` nearly cancels, and the remainder is absorbed by shrinking the
overlap ``c_m`` of the single item with the largest ``lambda``, which then
needs one extra dimension. For ``n`` items the vectors live in ``C^(n+1)``.

Phase conventions: ``alpha_k = gamma_k = 0`` so the B-component of item ``k``
carries the whole phase ``phi_k``; the extra coordinate of item ``m`` is zero
in ``|A>`` and real in ``|B>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateItemError, DomainError, InfeasibleModelError
from .ingest import ConceptPairData
from .numerics import inner_product, norm

# Slack for |cos phi| slightly above 1 or a radicand slightly below 0 from rounding.
FEASIBILITY_SLACK = 1e-12


def _excess(mu_a, mu_b, mu_ab):
    return mu_ab - 0.5 * (mu_a + mu_b)


def interference_phase(mu_a: float, mu_b: float, mu_ab: float, c: float = 1.0, *, item: str | None = None) -> float:
    """cos(phi) needed for the disjunction probability, given overlap ``c``."""
    name = f" {item!r}" if item is not None else ""
    if mu_a <= 0.0 or mu_b <= 0.0:
        raise DegenerateItemError(f"item{name}: phase undefined when mu_a*mu_b = 0")
    if not (0.0 < c <= 1.0):
        raise DomainError(f"overlap c must lie in (0, 1], got {c}")
    cos_phi = _excess(mu_a, mu_b, mu_ab) / (c * math.sqrt(mu_a * mu_b))
    if abs(cos_phi) > 1.0 + FEASIBILITY_SLACK:
        raise InfeasibleModelError(
            f"item{name}: |cos phi| = {abs(cos_phi):.6g} > 1; disjunction value cannot be reached by interference",
            item=item,
        )
    return max(-1.0, min(1.0, cos_phi))


def lambda_value(mu_a: float, mu_b: float, mu_ab: float, *, item: str | None = None) -> float:
    """|sin-part| of the interference amplitude at unit overlap."""
    radicand = mu_a * mu_b - _excess(mu_a, mu_b, mu_ab) ** 2
    if radicand < -FEASIBILITY_SLACK:
        name = f" {item!r}" if item is not None else ""
        raise InfeasibleModelError(f"item{name}: lambda radicand {radicand:.3g} < 0", item=item)
    return math.sqrt(max(radicand, 0.0))


class SignAssignment(NamedTuple):
    epsilons: tuple[int, ...]
    partial_sums: tuple[float, ...]
    total: float
    order: tuple[int, ...]

    @property
    def ranks(self) -> tuple[int, ...]:
        """1-based lambda rank of each item, in original item order."""
        r = [0] * len(self.order)
        for pos, k in enumerate(self.order):
            r[k] = pos + 1
        return tuple(r)


def assign_signs(lambdas: Sequence[float]) -> SignAssignment:
    """Greedy signs keeping each partial sum as small as possible but non-negative.

    Items are visited by descending lambda (ties by index). The first gets +1;
    each next one is subtracted when that keeps the running sum >= 0 and added
    otherwise.
    """
    lam = [float(v) for v in lambdas]
    if not lam or max(lam) <= 0.0:
        raise DegenerateItemError("sign assignment needs at least one positive lambda")
    if min(lam) < 0.0:
        raise DomainError("lambdas must be non-negative")
    order = sorted(range(len(lam)), key=lambda k: (-lam[k], k))
    eps = [0] * len(lam)
    partial = []
    s = 0.0
    for j, k in enumerate(order):
        if j > 0 and s - lam[k] >= 0.0:
            s -= lam[k]
            eps[k] = -1
        else:
            s += lam[k]
            eps[k] = 1
        partial.append(s)
    return SignAssignment(tuple(eps), tuple(partial), s, tuple(order))


def compute_cm(S: float, lambda_m: float, mu_a_m: float, mu_b_m: float, mu_ab_m: float, *, item: str | None = None) -> float:
    """Overlap of the max-lambda item that cancels the residual sine sum ``S``."""
    if mu_a_m * mu_b_m <= 0.0:
        raise DegenerateItemError("c_m undefined when mu_a*mu_b = 0")
    cm = math.sqrt(((S - lambda_m) ** 2 + _excess(mu_a_m, mu_b_m, mu_ab_m) ** 2) / (mu_a_m * mu_b_m))
    if cm > 1.0 + FEASIBILITY_SLACK:
        name = f" {item!r}" if item is not None else ""
        raise InfeasibleModelError(
            f"item{name}: c_m = {cm:.6g} > 1; residual sine sum too large for a single reduced overlap",
            item=item,
        )
    return min(cm, 1.0)


@dataclass(frozen=True, eq=False)
class HilbertModel:
    labels: tuple[str, ...]
    mu_a: np.ndarray
    mu_b: np.ndarray
    mu_ab: np.ndarray
    phases: np.ndarray  # radians, signed
    cos_phi: np.ndarray
    epsilons: tuple[int, ...]
    lambdas: np.ndarray
    order: tuple[int, ...]
    partial_sums: tuple[float, ...]
    s_residual: float
    m_index: int  # 0-based
    c: np.ndarray
    vector_a: np.ndarray
    vector_b: np.ndarray
    greedy_epsilons: tuple[int, ...] = field(default=())

    @property
    def n_items(self) -> int:
        return len(self.labels)

    @property
    def phases_deg(self) -> np.ndarray:
        return np.degrees(self.phases)

    @property
    def lambda_rank(self) -> tuple[int, ...]:
        r = [0] * self.n_items
        for pos, k in enumerate(self.order):
            r[k] = pos + 1
        return tuple(r)

    @property
    def c_m(self) -> float:
        return float(self.c[self.m_index])


def build_state_vectors(data: ConceptPairData) -> HilbertModel:
    mu_a, mu_b, mu_ab = data.mu_a, data.mu_b, data.mu_ab
    labels = tuple(data.labels)
    n = len(labels)
    for k in range(n):
        if mu_a[k] * mu_b[k] <= 0.0:
            raise DegenerateItemError(f"item {labels[k]!r}: mu_a*mu_b = 0, phase undefined")
    lambdas = np.array([lambda_value(mu_a[k], mu_b[k], mu_ab[k], item=labels[k]) for k in range(n)])
    signs = assign_signs(lambdas)
    m = signs.order[0]
    cm = compute_cm(signs.total, lambdas[m], mu_a[m], mu_b[m], mu_ab[m], item=labels[m])
    if cm <= 0.0:
        raise InfeasibleModelError(f"item {labels[m]!r}: c_m = 0 leaves its phase undefined", item=labels[m])

    c = np.ones(n)
    c[m] = cm
    cos_phi = np.array([interference_phase(mu_a[k], mu_b[k], mu_ab[k], c[k], item=labels[k]) for k in range(n)])
    eps = list(signs.epsilons)
    # Item m must supply lambda_m - S to the sine sum; the greedy sum never exceeds lambda_m,
    # so this is +1 in practice.
    eps[m] = 1 if lambdas[m] - signs.total >= 0.0 else -1
    phases = np.array(eps) * np.arccos(cos_phi)

    vec_a = np.zeros(n + 1, dtype=complex)
    vec_b = np.zeros(n + 1, dtype=complex)
    vec_a[:n] = np.sqrt(mu_a)
    vec_b[:n] = np.sqrt(mu_b) * c * np.exp(1j * phases)
    vec_b[n] = math.sqrt(mu_b[m]) * math.sqrt(1.0 - cm * cm)

    return HilbertModel(
        labels=labels,
        mu_a=mu_a,
        mu_b=mu_b,
        mu_ab=mu_ab,
        phases=phases,
        cos_phi=cos_phi,
        epsilons=tuple(eps),
        lambdas=lambdas,
        order=signs.order,
        partial_sums=signs.partial_sums,
        s_residual=signs.total,
        m_index=m,
        c=c,
        vector_a=vec_a,
        vector_b=vec_b,
        greedy_epsilons=signs.epsilons,
    )


class Orthogonality(NamedTuple):
    cos_sum: float
    sin_sum: float
    abs_inner: float


def verify_orthogonality(model: HilbertModel) -> Orthogonality:
    """Cosine and sine sums of <A|B> from the model parameters, plus |<A|B>| from the vectors."""
    weights = model.c * np.sqrt(model.mu_a * model.mu_b)
    return Orthogonality(
        float(math.fsum(weights * np.cos(model.phases))),
        float(math.fsum(weights * np.sin(model.phases))),
        abs(inner_product(model.vector_a, model.vector_b)),
    )


def reconstruct_disjunction(model: HilbertModel) -> np.ndarray:
    return 0.5 * (model.mu_a + model.mu_b) + model.c * np.sqrt(model.mu_a * model.mu_b) * np.cos(model.phases)


def item_projector_coords(model: HilbertModel, k: int) -> tuple[int, ...]:
    """Canonical-basis coordinates spanned by item ``k``'s projector (0-based)."""
    if k == model.m_index:
        return (k, model.n_items)
    return (k,)


def disjunction_state(model: HilbertModel) -> np.ndarray:
    return (model.vector_a + model.vector_b) / math.sqrt(2.0)


def born_probability(state, projector_coords: Sequence[int]) -> float:
    """Probability of the outcome whose projector spans the given canonical coordinates."""
    psi = np.asarray(state, dtype=complex)
    idx = _check_coords(psi, projector_coords)
    return float(np.sum(np.abs(psi[idx]) ** 2))


def collapse(state, projector_coords: Sequence[int]) -> np.ndarray:
    """Post-measurement state: projection onto the coordinates, renormalized."""
    psi = np.asarray(state, dtype=complex)
    idx = _check_coords(psi, projector_coords)
    projected = np.zeros_like(psi)
    projected[idx] = psi[idx]
    length = norm(projected)
    if length == 0.0:
        raise DomainError("collapse undefined: projection of the state is the zero vector")
    return projected / length


def _check_coords(psi, coords):
    idx = sorted(set(int(i) for i in coords))
    if idx and (idx[0] < 0 or idx[-1] >= psi.shape[0]):
        raise DomainError(f"projector coordinates {idx} exceed dimension {psi.shape[0]}")
    return np.array(idx, dtype=int)


# -- reporting ---------------------------------------------------------------

def _sig6(x: float) -> float:
    return float(f"{x:.6g}")


@dataclass(frozen=True)
class ModelReport:
    rows: tuple[dict, ...]
    scalars: dict

    def to_json(self) -> str:
        return json.dumps({"scalars": self.scalars, "items": list(self.rows)}, indent=2) + "\n"

    def to_text(self) -> str:
        head = f"{'k':>3}  {'item':<14}{'mu(A)':>10}{'mu(B)':>10}{'mu(AorB)':>10}{'lambda':>11}{'rank':>6}{'eps':>5}{'phi':>9}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r['index']:>3}  {r['label']:<14}{r['mu_a']:>10.4f}{r['mu_b']:>10.4f}{r['mu_ab']:>10.4f}"
                f"{r['lambda']:>11.5f}{r['lambda_rank']:>6}{r['epsilon']:>+5d}{r['phi_deg']:>8.1f}°"
            )
        lines.append("")
        for key, value in self.scalars.items():
            lines.append(f"{key} = {value:.6g}" if isinstance(value, float) else f"{key} = {value}")
        return "\n".join(lines) + "\n"


def build_report(model: HilbertModel, indices: Sequence[int] | None = None) -> ModelReport:
    indices = list(indices) if indices is not None else list(range(1, model.n_items + 1))
    ranks = model.lambda_rank
    rows = tuple(
        {
            "index": indices[k],
            "label": model.labels[k],
            "mu_a": _sig6(model.mu_a[k]),
            "mu_b": _sig6(model.mu_b[k]),
            "mu_ab": _sig6(model.mu_ab[k]),
            "lambda": _sig6(model.lambdas[k]),
            "lambda_rank": ranks[k],
            "epsilon": model.epsilons[k],
            "phi_deg": _sig6(model.phases_deg[k]),
            "c": _sig6(model.c[k]),
        }
        for k in range(model.n_items)
    )
    ortho = verify_orthogonality(model)
    recon = float(np.max(np.abs(reconstruct_disjunction(model) - model.mu_ab)))
    scalars = {
        "n_items": model.n_items,
        "dimension": model.n_items + 1,
        "m_index": indices[model.m_index],
        "m_label": model.labels[model.m_index],
        "S": _sig6(model.s_residual),
        "c_m": _sig6(model.c_m),
        "norm_a": _sig6(norm(model.vector_a)),
        "norm_b": _sig6(norm(model.vector_b)),
        "orthogonality_residual": _sig6(ortho.abs_inner),
        "cos_sum": _sig6(ortho.cos_sum),
        "sin_sum": _sig6(ortho.sin_sum),
        "reconstruction_max_error": _sig6(recon),
    }
    return ModelReport(rows, scalars)


def vectors_csv(model: HilbertModel) -> str:
    lines = ["index,re_a,im_a,re_b,im_b"]
    for i, (a, b) in enumerate(zip(model.vector_a, model.vector_b), start=1):
        lines.append(f"{i},{a.real:.6g},{a.imag:.6g},{b.real:.6g},{b.imag:.6g}")
    return "\n".join(lines) + "\n"
