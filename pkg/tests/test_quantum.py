import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctcsim import quantum as q
from ctcsim.exceptions import DimensionError, InvalidStateError

from oracles import entropy_bits, partial_transpose_second_loops

S = 1 / math.sqrt(2)


def test_pure_state_rejects_unnormalised():
    with pytest.raises(InvalidStateError):
        q.PureState(np.array([1.0, 1.0]))


def test_pure_state_normalized():
    psi = q.PureState.normalized([3, 4j])
    np.testing.assert_allclose(psi.amplitudes, [0.6, 0.8j])
    assert psi.dims == (2,)


def test_pure_state_dims_mismatch():
    with pytest.raises(DimensionError):
        q.PureState(np.array([1, 0, 0, 0, 0, 0]), (2, 2))


def test_states_are_immutable():
    psi = q.ket(0)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 2


@pytest.mark.parametrize(
    "matrix",
    [
        np.array([[1.0, 1.0], [0.0, 0.0]]),  # not Hermitian
        np.diag([0.6, 0.6]),  # trace 1.2
        np.diag([1.5, -0.5]),  # negative eigenvalue
    ],
    ids=["non-hermitian", "trace", "negative"],
)
def test_density_invariants_enforced(matrix):
    with pytest.raises(InvalidStateError):
        q.DensityOperator(matrix)


def test_unitary_rejected():
    with pytest.raises(InvalidStateError):
        q.UnitaryGate(np.array([[1, 1], [0, 1]]))


def test_from_numerical_clips_roundoff():
    rho = q.DensityOperator.from_numerical(np.diag([1.0 + 1e-13, -1e-13]))
    assert rho.matrix[1, 1].real >= 0
    assert abs(np.trace(rho.matrix) - 1) < 1e-15


@pytest.mark.parametrize(
    "kind, amps",
    [
        ("phi_plus", [0, S, S, 0]),
        ("phi_minus", [0, S, -S, 0]),
        ("psi_plus", [S, 0, 0, S]),
        ("psi_minus", [S, 0, 0, -S]),
    ],
)
def test_bell_amplitudes(kind, amps):
    np.testing.assert_allclose(q.bell_state(kind).amplitudes, amps, atol=1e-15)


def test_bell_basis_orthonormal():
    m = np.column_stack([q.bell_state(k).amplitudes for k in q.BELL_KINDS])
    np.testing.assert_allclose(m.conj().T @ m, np.eye(4), atol=1e-15)


def test_bell_unknown():
    with pytest.raises(ValueError):
        q.bell_state("omega")


def test_cnot_matrix():
    expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    np.testing.assert_array_equal(q.standard_gate("CNOT").matrix, expected)


def test_cnot_control_rail_2():
    expected = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
    np.testing.assert_array_equal(q.standard_gate("CNOT", control_rail=2).matrix, expected)


def test_swap_matrix():
    expected = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    np.testing.assert_array_equal(q.standard_gate("SWAP").matrix, expected)


def test_hadamard_sends_zero_to_plus():
    out = q.apply_gate(q.standard_gate("H"), q.ket(0))
    np.testing.assert_allclose(out.amplitudes, [S, S], atol=1e-15)


def test_on_rail_x():
    x1 = q.on_rail(q.standard_gate("X"), 1)
    out = q.apply_gate(x1, q.ket(0, 1))
    np.testing.assert_allclose(out.amplitudes, q.ket(1, 1).amplitudes)


def test_gate_composition_dims():
    with pytest.raises(DimensionError):
        q.standard_gate("X") @ q.standard_gate("CNOT")


def test_unknown_gate():
    with pytest.raises(ValueError):
        q.standard_gate("T")


def test_entropy_examples():
    assert q.von_neumann_entropy(q.maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)
    assert q.von_neumann_entropy(q.projector(q.ket(0))) == pytest.approx(0.0, abs=1e-12)
    rho = q.DensityOperator(np.diag([0.75, 0.25]))
    # -(3/4 log2 3/4 + 1/4 log2 1/4)
    assert q.von_neumann_entropy(rho) == pytest.approx(0.8112781244591328, abs=1e-12)
    assert entropy_bits([0.75, 0.25]) == pytest.approx(0.8112781244591328, abs=1e-15)


def test_purity_examples():
    assert q.purity(q.maximally_mixed(2)) == pytest.approx(0.5)
    assert q.purity(q.projector(q.ket(0))) == pytest.approx(1.0)


def test_negativity_bell():
    phi = q.bell_state("psi_plus").amplitudes
    rho = np.outer(phi, phi.conj())
    oracle = -sum(x for x in np.linalg.eigvalsh(partial_transpose_second_loops(rho, 2, 2)) if x < 0)
    assert oracle == pytest.approx(0.5, abs=1e-14)
    assert q.negativity(q.DensityOperator(rho, (2, 2))) == pytest.approx(0.5, abs=1e-12)


def test_negativity_needs_bipartition():
    with pytest.raises(DimensionError):
        q.negativity(q.maximally_mixed(2))


def test_fidelity_and_trace_distance_examples(rng):
    zero, one = q.projector(q.ket(0)), q.projector(q.ket(1))
    assert q.trace_distance(zero, one) == pytest.approx(1.0)
    assert q.fidelity(zero, one) == pytest.approx(0.0, abs=1e-12)
    rho = q.random_density(3, rng)
    assert q.trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-14)
    assert q.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)
    plus = q.projector(q.qubit(S, S))
    assert q.fidelity(zero, plus) == pytest.approx(0.5, abs=1e-12)


def test_trace_distance_shape_mismatch():
    with pytest.raises(DimensionError):
        q.trace_distance(q.maximally_mixed(2), q.maximally_mixed(4))


@pytest.mark.parametrize("kind", q.BELL_KINDS)
def test_bell_reduced_entropy(kind):
    rho = q.projector(q.bell_state(kind))
    assert q.von_neumann_entropy(rho) <= 1e-9
    for keep in (0, 1):
        assert q.von_neumann_entropy(q.reduced_state(rho, keep)) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_pure_states_have_zero_entropy(seed):
    rng = np.random.default_rng(seed)
    psi = q.random_pure_state(2 + seed % 3, rng)
    assert q.von_neumann_entropy(q.projector(psi)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_schmidt_symmetry(seed, dims):
    rng = np.random.default_rng(seed)
    psi = q.random_pure_state(dims[0] * dims[1], rng, dims)
    rho = q.projector(psi)
    sa = q.von_neumann_entropy(q.reduced_state(rho, 0))
    sb = q.von_neumann_entropy(q.reduced_state(rho, 1))
    assert abs(sa - sb) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_product_negativity_zero(seed):
    rng = np.random.default_rng(seed)
    rho = q.tensor(q.random_density(2, rng), q.random_density(2, rng))
    assert q.negativity(rho) <= 1e-10


@pytest.mark.parametrize("d", [2, 3, 4])
def test_haar_unitary_is_unitary(d, rng):
    u = q.haar_unitary(d, rng)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(d), atol=1e-12)


def test_haar_seeded_reproducible():
    a = q.haar_unitary(4, np.random.default_rng(3))
    b = q.haar_unitary(4, np.random.default_rng(3))
    np.testing.assert_array_equal(a, b)


def test_random_density_valid(rng):
    rho = q.random_density(4, rng, rank=2)
    assert np.sum(np.linalg.eigvalsh(rho.matrix) > 1e-10) == 2
