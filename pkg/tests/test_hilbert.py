import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qconcepts import hilbert
from qconcepts.errors import DegenerateItemError, DomainError, InfeasibleModelError
from qconcepts.hilbert import (
    assign_signs,
    born_probability,
    build_state_vectors,
    collapse,
    compute_cm,
    disjunction_state,
    interference_phase,
    item_projector_coords,
    lambda_value,
    reconstruct_disjunction,
    verify_orthogonality,
)
from qconcepts.ingest import ConceptPairData, ItemRecord
from qconcepts.numerics import norm

from reference import C_M, S_RESIDUAL, TABLE1, TOMATO, VECTOR_B


def make_data(mu_a, mu_b, mu_ab):
    items = tuple(ItemRecord(k + 1, f"item{k + 1}", float(a), float(b), float(c))
                  for k, (a, b, c) in enumerate(zip(mu_a, mu_b, mu_ab)))
    return ConceptPairData("A", "B", items)


# -- per-item stages ----------------------------------------------------------

def test_phase_almond():
    cos_phi = interference_phase(0.0359, 0.0133, 0.0269)
    assert cos_phi == pytest.approx(0.0023 / math.sqrt(0.0359 * 0.0133), rel=1e-12)
    assert math.degrees(math.acos(cos_phi)) == pytest.approx(84.0, abs=0.3)


def test_phase_acorn():
    assert math.degrees(math.acos(interference_phase(0.0425, 0.0108, 0.0249))) == pytest.approx(94.5, abs=0.3)


def test_phase_vanishing_interference():
    assert interference_phase(0.03, 0.05, 0.04) == pytest.approx(0.0, abs=1e-15)


def test_phase_errors():
    with pytest.raises(DegenerateItemError):
        interference_phase(0.0, 0.1, 0.05)
    with pytest.raises(InfeasibleModelError, match="'Mango'"):
        interference_phase(0.01, 0.01, 0.5, item="Mango")
    with pytest.raises(DomainError):
        interference_phase(0.1, 0.1, 0.1, c=0.0)


def test_lambda_values():
    assert lambda_value(0.0359, 0.0133, 0.0269) == pytest.approx(0.0217, abs=4e-4)
    assert lambda_value(0.0881, 0.0679, 0.0688) == pytest.approx(0.07679, abs=1e-5)
    assert lambda_value(0.04, 0.09, 0.065) == pytest.approx(0.06, rel=1e-12)
    with pytest.raises(InfeasibleModelError):
        lambda_value(0.01, 0.01, 0.5)


def test_sign_examples():
    r = assign_signs([0.5, 0.3, 0.2])
    assert r.epsilons == (1, -1, -1)
    assert r.total == pytest.approx(0.0, abs=1e-15)
    r = assign_signs([1.0, 1.0])
    assert r.epsilons == (1, -1) and r.total == 0.0
    assert r.order == (0, 1)


def test_sign_ties_by_index():
    r = assign_signs([0.2, 0.5, 0.5])
    assert r.order == (1, 2, 0)
    assert r.ranks == (3, 1, 2)


def test_sign_degenerate():
    with pytest.raises(DegenerateItemError):
        assign_signs([0.0, 0.0])
    with pytest.raises(DegenerateItemError):
        assign_signs([])


def test_signs_on_published_lambdas():
    r = assign_signs([row[4] for row in TABLE1])
    assert r.epsilons == tuple(row[6] for row in TABLE1)
    assert r.ranks == tuple(row[5] for row in TABLE1)
    assert r.total == pytest.approx(S_RESIDUAL, abs=1e-3)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=40).filter(lambda v: max(v) > 0))
def test_greedy_partial_sums(lams):
    r = assign_signs(lams)
    assert all(s >= 0 for s in r.partial_sums)
    assert r.total <= max(lams) + 1e-12
    assert r.total == pytest.approx(math.fsum(e * l for e, l in zip(r.epsilons, lams)), abs=1e-12)


def test_cm_examples():
    assert compute_cm(0.03, 0.03, 0.04, 0.09, 0.065) == 0.0
    # with no interference excess, lambda_m = sqrt(mu_a mu_b) so S = 0 gives c_m = lambda_m / sqrt(mu_a mu_b)
    assert compute_cm(0.0, 0.06, 0.04, 0.09, 0.065) == pytest.approx(1.0, rel=1e-12)
    assert compute_cm(0.0, 0.03, 0.04, 0.09, 0.065) == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(InfeasibleModelError):
        compute_cm(0.0, 0.2, 0.04, 0.09, 0.065)


# -- model construction -------------------------------------------------------

def test_corpus_scalars(model):
    assert model.m_index == TOMATO
    assert model.s_residual == pytest.approx(S_RESIDUAL, abs=1e-3)
    assert model.c_m == pytest.approx(C_M, abs=1e-3)
    assert list(model.c[:TOMATO]) + list(model.c[TOMATO + 1:]) == [1.0] * 23


def test_vector_entries(model, corpus):
    assert model.vector_a[0] == pytest.approx(0.1895, abs=1e-3)
    assert model.vector_a[0] == pytest.approx(math.sqrt(corpus.mu_a[0]), rel=1e-15)
    assert model.vector_a[24] == 0
    assert model.vector_b[24].real == pytest.approx(0.1552, abs=1e-3)
    assert model.vector_b[24].imag == 0
    assert norm(model.vector_a) == pytest.approx(1, abs=1e-9)
    assert norm(model.vector_b) == pytest.approx(1, abs=1e-9)


def test_published_tomato_component_is_the_unit_overlap_value(model, raw_corpus):
    """The printed Tomato entry of |B> carries sqrt(mu_B) and the c=1 phase, not c_m."""
    printed_mag, printed_phase = VECTOR_B[TOMATO]
    built = model.vector_b[TOMATO]
    assert abs(abs(built) - printed_mag) > 0.04
    assert abs(built) == pytest.approx(math.sqrt(model.mu_b[TOMATO]) * model.c_m, rel=1e-12)
    it = raw_corpus.items[TOMATO]
    assert printed_mag == pytest.approx(math.sqrt(it.mu_b), abs=1e-4)
    unit_phase = math.degrees(math.acos(interference_phase(it.mu_a, it.mu_b, it.mu_ab, 1.0)))
    assert printed_phase == pytest.approx(unit_phase, abs=0.1)
    assert model.phases_deg[TOMATO] == pytest.approx(98.5, abs=0.1)


def test_orthogonality_corpus(model):
    o = verify_orthogonality(model)
    assert abs(o.cos_sum) <= 1e-9 and abs(o.sin_sum) <= 1e-9 and o.abs_inner <= 1e-9


def test_orthogonality_two_item_symmetric():
    m = build_state_vectors(make_data([0.5, 0.5], [0.5, 0.5], [0.5, 0.5]))
    assert m.phases_deg == pytest.approx([90.0, -90.0])
    o = verify_orthogonality(m)
    assert abs(o.cos_sum) < 1e-15 and abs(o.sin_sum) < 1e-15 and o.abs_inner < 1e-15


def test_flipped_sign_breaks_sine_sum(model):
    k = 0
    flipped = model.phases.copy()
    flipped[k] = -flipped[k]
    o = verify_orthogonality(replace(model, phases=flipped))
    assert abs(o.sin_sum) == pytest.approx(2 * model.lambdas[k], rel=1e-9)


def test_reconstruction(model, corpus):
    recon = reconstruct_disjunction(model)
    assert recon[0] == pytest.approx(0.0269, abs=1e-4)
    assert np.max(np.abs(recon - corpus.mu_ab)) <= 1e-9


def test_reconstruction_without_interference(model):
    m = replace(model, phases=np.full(model.n_items, math.pi / 2), c=np.ones(model.n_items))
    assert reconstruct_disjunction(m) == pytest.approx(0.5 * (model.mu_a + model.mu_b), abs=1e-15)


def test_phase_signs_follow_epsilon(model):
    assert all(np.sign(model.phases) == np.array(model.epsilons))
    assert np.abs(model.phases) == pytest.approx(np.arccos(model.cos_phi), abs=1e-15)
    assert model.epsilons == model.greedy_epsilons


def test_infeasible_item_named(corpus):
    mu_ab = corpus.mu_ab.copy()
    mu_ab[4] = 0.2
    with pytest.raises(InfeasibleModelError, match="Coconut") as info:
        build_state_vectors(corpus.with_columns(mu_ab=mu_ab))
    assert info.value.item == "Coconut"


def test_degenerate_item_rejected():
    with pytest.raises(DegenerateItemError):
        build_state_vectors(make_data([0.5, 0.5, 0.0], [0.2, 0.3, 0.5], [0.3, 0.4, 0.3]))


# -- Born rule -----------------------------------------------------------------

def test_born_full_and_item(model):
    assert born_probability(model.vector_a, range(25)) == pytest.approx(1.0, abs=1e-12)
    assert born_probability(model.vector_a, [7]) == pytest.approx(0.1184, abs=5e-5)


def test_born_reproduces_all_three_columns(model, corpus):
    psi = disjunction_state(model)
    assert norm(psi) == pytest.approx(1.0, abs=1e-12)
    for k in range(model.n_items):
        coords = item_projector_coords(model, k)
        assert born_probability(model.vector_a, coords) == pytest.approx(corpus.mu_a[k], abs=1e-12)
        assert born_probability(model.vector_b, coords) == pytest.approx(corpus.mu_b[k], abs=1e-12)
        assert born_probability(psi, coords) == pytest.approx(corpus.mu_ab[k], abs=1e-12)


@given(st.integers(2, 30), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_born_spectral_family_sums_to_one(dim, parts, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    labels = rng.integers(0, parts, size=dim)
    total = math.fsum(born_probability(psi, np.flatnonzero(labels == j)) for j in range(parts))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_collapse():
    psi = np.array([0.6, 0.0, 0.8j])
    assert collapse(psi, [2]) == pytest.approx(np.array([0, 0, 1j]))
    with pytest.raises(DomainError):
        collapse(psi, [1])
    with pytest.raises(DomainError):
        born_probability(psi, [5])


# -- end to end ------------------------------------------------------------------

@st.composite
def feasible_tables(draw):
    n = draw(st.integers(2, 30))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    mu_a = rng.dirichlet(np.ones(n))
    mu_b = rng.dirichlet(np.ones(n))
    w = np.sqrt(mu_a * mu_b)
    u = rng.uniform(-0.5, 0.5, size=n)
    u -= np.sum(w * u) / np.sum(w)
    mu_ab = 0.5 * (mu_a + mu_b) + w * u
    return mu_a, mu_b, mu_ab


@given(feasible_tables())
def test_build_verify_reconstruct(table):
    mu_a, mu_b, mu_ab = table
    assume(np.all(mu_a * mu_b > 1e-12))
    try:
        m = build_state_vectors(make_data(mu_a, mu_b, mu_ab))
    except InfeasibleModelError as exc:
        assume("c_m = 0" not in str(exc))
        raise
    assert 0 < m.c_m <= 1
    assert norm(m.vector_a) == pytest.approx(1, abs=1e-9)
    assert norm(m.vector_b) == pytest.approx(1, abs=1e-9)
    o = verify_orthogonality(m)
    assert max(abs(o.cos_sum), abs(o.sin_sum), o.abs_inner) <= 1e-9
    assert np.max(np.abs(reconstruct_disjunction(m) - mu_ab)) <= 1e-9


def test_report_layout(model):
    report = hilbert.build_report(model)
    assert len(report.rows) == 24
    assert report.rows[0]["label"] == "Almond" and report.rows[0]["lambda_rank"] == 16
    assert report.scalars["m_label"] == "Tomato"
    text = report.to_text()
    assert "Tomato" in text and "c_m = 0.8026" in text
    csv_text = hilbert.vectors_csv(model)
    lines = csv_text.splitlines()
    assert lines[0] == "index,re_a,im_a,re_b,im_b" and len(lines) == 26
