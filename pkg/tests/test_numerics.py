import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qconcepts.errors import DomainError, SingularMatrixError
from qconcepts.numerics import as_complex_vector, inner_product, norm, solve_dense_linear

cfloats = st.floats(-10, 10, allow_nan=False)
cnums = st.builds(complex, cfloats, cfloats)


def loop_inner(a, b):
    total = 0j
    for x, y in zip(a, b):
        total += x.conjugate() * y
    return total


def test_basis_vectors():
    e = np.eye(4, dtype=complex)
    assert inner_product(e[1], e[1]) == 1
    assert inner_product(e[0], e[2]) == 0


def test_inner_product_matches_loop():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.normal(size=25) + 1j * rng.normal(size=25)
        b = rng.normal(size=25) + 1j * rng.normal(size=25)
        assert abs(inner_product(a, b) - loop_inner(a, b)) <= 1e-13


def test_inner_product_antilinear_in_bra():
    a = np.array([1j, 0])
    b = np.array([1, 0])
    assert inner_product(a, b) == -1j
    assert inner_product(2j * a, b) == -2j * inner_product(a, b)


def test_length_mismatch():
    with pytest.raises(DomainError):
        inner_product([1, 2], [1, 2, 3])


def test_norm_examples():
    assert norm(np.zeros(3)) == 0
    assert norm([3 + 0j, 4 + 0j]) == 5


@given(st.lists(cnums, min_size=1, max_size=12), cnums)
def test_norm_scaling(vals, c):
    a = np.array(vals)
    assert norm(c * a) == pytest.approx(abs(c) * norm(a), rel=1e-12, abs=1e-12)


@given(st.lists(st.tuples(cnums, cnums), min_size=1, max_size=12))
def test_conjugate_symmetry(pairs):
    a = np.array([p[0] for p in pairs])
    b = np.array([p[1] for p in pairs])
    assert inner_product(a, b) == pytest.approx(inner_product(b, a).conjugate(), abs=1e-12)


def test_as_complex_vector_rejects_nan():
    with pytest.raises(DomainError):
        as_complex_vector([1, np.nan])


def test_solve_identity():
    rhs = np.array([1.5, -2.0, 3.25])
    assert np.array_equal(solve_dense_linear(np.eye(3), rhs), rhs)


def test_solve_diagonal():
    assert solve_dense_linear([[2, 0], [0, 4]], [2, 8]) == pytest.approx([1, 2])


def test_solve_needs_pivoting():
    x = solve_dense_linear([[0.0, 1.0], [1.0, 0.0]], [3.0, 5.0])
    assert x == pytest.approx([5.0, 3.0])


def test_solve_matches_numpy_on_random_24():
    rng = np.random.default_rng(7)
    for _ in range(50):
        M = rng.normal(size=(24, 24)) + 5 * np.eye(24)
        rhs = rng.normal(size=24)
        x = solve_dense_linear(M, rhs)
        assert np.linalg.norm(M @ x - rhs) / np.linalg.norm(rhs) <= 1e-10
        assert x == pytest.approx(np.linalg.solve(M, rhs), rel=1e-9, abs=1e-12)


def test_singular_matrix():
    with pytest.raises(SingularMatrixError):
        solve_dense_linear([[1, 2], [2, 4]], [1, 1])
    with pytest.raises(SingularMatrixError):
        solve_dense_linear([[0, 0], [1, 1]], [1, 1])


def test_shape_errors():
    with pytest.raises(DomainError):
        solve_dense_linear(np.ones((2, 3)), [1, 1])
    with pytest.raises(DomainError):
        solve_dense_linear(np.eye(2), [1, 1, 1])


@given(st.integers(1, 24), st.integers(0, 2**32 - 1))
def test_residual_bound_holds(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n))
    rhs = rng.normal(size=n)
    try:
        x = solve_dense_linear(M, rhs)
    except SingularMatrixError:
        return
    assert np.linalg.norm(M @ x - rhs) <= 1e-8 * np.linalg.norm(rhs)
