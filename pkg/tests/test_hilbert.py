"""Structured operators against their independently densified matrices."""

from __future__ import annotations

import numpy as np
import pytest

from qbandit.errors import DimensionError, InvalidOperator
from qbandit.hilbert import (
    BlockEnvUnitary,
    CompositeReflection,
    DenseMatrix,
    DiagonalSign,
    PrepUnitary,
    StateVector,
    TensorReflection,
    adjoint,
    apply,
    basis_index,
    basis_state,
    densify,
    inner,
    marginal_over_y,
)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng: np.random.Generator, dims: tuple[int, int]) -> StateVector:
    n, m = dims
    amps = rng.normal(size=n * m) + 1j * rng.normal(size=n * m)
    return StateVector(dims, amps / np.linalg.norm(amps))


def random_operator(rng: np.random.Generator, dims: tuple[int, int]):
    n, m = dims
    kind = rng.integers(6)
    if kind == 0:
        return DiagonalSign(rng.random((n, m)) < 0.5)
    if kind == 1:
        return BlockEnvUnitary(np.stack([random_unitary(rng, m) for _ in range(n)]))
    if kind == 2:
        return PrepUnitary(random_unitary(rng, n), m)
    if kind == 3:
        return CompositeReflection(dims, int(rng.integers(n * m)))
    if kind == 4:
        return TensorReflection(dims, int(rng.integers(n)), int(rng.integers(m)))
    return DenseMatrix(dims, random_unitary(rng, n * m))


def test_basis_index_convention():
    assert basis_index((3, 4), 0, 0) == 0
    assert basis_index((3, 4), 1, 0) == 4
    assert basis_index((3, 4), 2, 3) == 11
    with pytest.raises(DimensionError):
        basis_index((3, 4), 3, 0)
    with pytest.raises(DimensionError):
        basis_index((3, 4), 0, -1)


def test_state_vector_validation():
    with pytest.raises(ValueError):
        StateVector((2, 1), np.array([1.0, 1.0]))
    with pytest.raises(DimensionError):
        StateVector((2, 2), np.array([1.0, 0.0]))
    with pytest.raises(DimensionError):
        StateVector((0, 2), np.zeros(0))


def test_state_vector_copies_and_freezes():
    amps = np.array([1.0, 0.0], dtype=complex)
    s = StateVector((2, 1), amps)
    amps[0] = 0.5
    assert s.amps[0] == 1.0
    with pytest.raises(ValueError):
        s.amps[0] = 0.0


def test_basis_state():
    s = basis_state((2, 3), 4)
    assert s.amps[4] == 1.0
    assert np.count_nonzero(s.amps) == 1
    with pytest.raises(DimensionError):
        basis_state((2, 3), 6)


def test_diagonal_sign_flips_masked_entries():
    mask = np.array([[True, False], [False, True]])
    s = StateVector((2, 2), np.full(4, 0.5))
    out = apply(DiagonalSign(mask), s)
    assert np.array_equal(out.amps, np.array([-0.5, 0.5, 0.5, -0.5]))


def test_composite_reflection_negates_all_but_anchor():
    s = StateVector((2, 2), np.full(4, 0.5))
    out = apply(CompositeReflection((2, 2), 2), s)
    assert np.array_equal(out.amps, np.array([-0.5, -0.5, 0.5, -0.5]))


@pytest.mark.parametrize("seed", range(20))
def test_apply_matches_densify(seed):
    """Structured application equals multiplication by the densified matrix."""
    rng = np.random.default_rng(seed)
    dims = (int(rng.integers(1, 6)), int(rng.integers(1, 6)))
    op = random_operator(rng, dims)
    s = random_state(rng, dims)
    direct = apply(op, s).amps
    dense = densify(op) @ s.amps
    assert np.abs(direct - dense).max() <= 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_adjoint_matches_densify(seed):
    rng = np.random.default_rng(100 + seed)
    dims = (int(rng.integers(1, 6)), int(rng.integers(1, 6)))
    op = random_operator(rng, dims)
    assert np.abs(densify(adjoint(op)) - densify(op).conj().T).max() <= 1e-12


def test_adjoint_inverts_apply():
    rng = np.random.default_rng(7)
    dims = (4, 3)
    s = random_state(rng, dims)
    for _ in range(50):
        op = random_operator(rng, dims)
        back = apply(adjoint(op), apply(op, s))
        assert np.abs(back.amps - s.amps).max() <= 1e-12


def test_long_chain_preserves_norm():
    rng = np.random.default_rng(11)
    dims = (3, 4)
    s = random_state(rng, dims)
    for _ in range(1000):
        s = apply(random_operator(rng, dims), s)
    assert abs(np.linalg.norm(s.amps) - 1.0) <= 1e-12


def test_sign_operators_are_involutions():
    rng = np.random.default_rng(3)
    dims = (3, 2)
    s = random_state(rng, dims)
    for op in (
        DiagonalSign(rng.random(dims) < 0.5),
        CompositeReflection(dims, 1),
        TensorReflection(dims, 2, 0),
    ):
        twice = apply(op, apply(op, s))
        assert np.array_equal(twice.amps, s.amps)


def test_dims_mismatch_raises():
    s = basis_state((2, 2))
    with pytest.raises(DimensionError):
        apply(DiagonalSign(np.zeros((3, 2), dtype=bool)), s)


def test_unitarity_enforced():
    with pytest.raises(InvalidOperator):
        PrepUnitary(np.array([[1.0, 0.0], [1.0, 1.0]]), 2)
    with pytest.raises(InvalidOperator):
        BlockEnvUnitary(np.ones((1, 2, 2)))
    with pytest.raises(InvalidOperator):
        DenseMatrix((2, 1), np.full((2, 2), 0.5))
    # deviation within 1e-10 is absorbed
    eps = 2e-11
    PrepUnitary(np.array([[1.0 + eps, 0.0], [0.0, 1.0]]), 1)


def test_densify_cap():
    op = CompositeReflection((10, 10), 0)
    with pytest.raises(DimensionError):
        densify(op, cap=99)
    assert densify(op, cap=100).shape == (100, 100)


def test_inner_is_conjugate_linear_in_first_argument():
    a = StateVector((2, 1), np.array([1j, 0.0]))
    b = StateVector((2, 1), np.array([1.0, 0.0]))
    assert inner(a, b) == pytest.approx(-1j)
    assert inner(b, a) == pytest.approx(1j)
    with pytest.raises(DimensionError):
        inner(a, basis_state((1, 2)))


def test_marginal_over_y():
    rng = np.random.default_rng(5)
    s = random_state(rng, (3, 4))
    marg = marginal_over_y(s)
    assert marg.shape == (3,)
    assert marg.sum() == pytest.approx(1.0, abs=1e-12)
    assert marg[1] == pytest.approx(np.abs(s.amps[4:8]) ** 2 @ np.ones(4))
