import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctcsim import quantum as q
from ctcsim import teleport as tp
from ctcsim.exceptions import DimensionError

S = 1 / math.sqrt(2)


def overlap(a, b):
    return abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2


def test_timeline_ordering():
    tp.TeleportTimeline(0, 1, 2)
    with pytest.raises(ValueError):
        tp.TeleportTimeline(1, 1, 2)
    with pytest.raises(ValueError):
        tp.TeleportTimeline(0, 3, 2)


def test_evolve_zero_time():
    psi = q.qubit(0.6, 0.8j)
    np.testing.assert_allclose(tp.evolve(tp.TimedQubit(psi, 2.0), 0).amplitudes, psi.amplitudes)


def test_evolve_energy_eigenstate():
    out = tp.evolve(tp.TimedQubit(q.ket(0), 3.0), 17.2)
    np.testing.assert_allclose(out.amplitudes, [1, 0])


def test_evolve_half_period():
    out = tp.evolve(tp.TimedQubit(q.qubit(S, S), 1.0), math.pi)
    np.testing.assert_allclose(out.amplitudes, [S, -S], atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_bell_probabilities_quarter(seed):
    psi = q.random_pure_state(2, np.random.default_rng(seed))
    p = tp.bell_probabilities(psi, q.bell_state("phi_plus"))
    np.testing.assert_allclose(p, 0.25, atol=1e-12)


def test_bell_probabilities_product_resource():
    # <psi+-|00> = 1/sqrt2, <phi+-|00> = 0
    p = tp.bell_probabilities(q.ket(0), q.ket(0, 0))
    np.testing.assert_allclose(p, [0.5, 0.5, 0, 0], atol=1e-15)


def test_bell_probabilities_dims():
    with pytest.raises(DimensionError):
        tp.bell_probabilities(q.ket(0, 0), q.ket(0, 0))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bell_probabilities_complete(seed):
    rng = np.random.default_rng(seed)
    p = tp.bell_probabilities(q.random_pure_state(2, rng), q.random_pure_state(4, rng, (2, 2)))
    assert np.all(p >= 0)
    assert abs(p.sum() - 1) <= 1e-12


def test_retrodict_basis_state():
    tl = tp.TeleportTimeline(0.0, 1.5, 3.0)
    src = tp.retrodict_source(tp.TimedQubit(q.ket(0), 2.0, created_at=1.5), tl)
    assert overlap(src, q.ket(0)) == pytest.approx(1.0, abs=1e-15)


def test_retrodict_closed_form():
    mu, nu, omega = 0.6, 0.8j, 1.3
    tl = tp.TeleportTimeline(-0.4, 1.0, 2.0)
    src = tp.retrodict_source(tp.TimedQubit(q.qubit(mu, nu), omega, created_at=1.0), tl)
    expected = np.array([mu * cmath.exp(1j * (tl.t_s - tl.t_p) * omega), nu])
    assert abs(np.vdot(expected, src.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-14)


def test_retrodict_forward_to_measurement():
    mu, nu, omega = 0.6, 0.8, 2.0
    tl = tp.TeleportTimeline(0.0, 1.0, 2.5)
    q_alice = tp.TimedQubit(q.qubit(mu, nu), omega, created_at=1.0)
    bob = tp.TimedQubit(tp.retrodict_source(q_alice, tl), omega, created_at=0.0)
    at_tm = tp.evolve(bob, tl.t_m - tl.t_s)
    expected = q.qubit(mu, cmath.exp(-1j * (tl.t_m - tl.t_p) * omega) * nu)
    assert overlap(at_tm, expected) == pytest.approx(1.0, abs=1e-12)


finite = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 20), finite, st.floats(0.01, 10), st.floats(0.01, 10))
def test_retrodiction_round_trip(seed, omega, t_s, gap1, gap2):
    psi = q.random_pure_state(2, np.random.default_rng(seed))
    tl = tp.TeleportTimeline(t_s, t_s + gap1, t_s + gap1 + gap2)
    src = tp.retrodict_source(tp.TimedQubit(psi, omega, created_at=tl.t_p), tl)
    back = tp.evolve(tp.TimedQubit(src, omega), tl.t_p - tl.t_s)
    assert overlap(back, psi) >= 1 - 1e-12


@pytest.mark.parametrize("name, weight", [("I", 1.0), ("X", 0.0), ("Y", 0.0), ("Z", 0.0), ("H", 0.0)])
def test_loop_weight(name, weight):
    assert tp.loop_consistency_weight(q.standard_gate(name)) == weight


@given(st.floats(-10, 10, allow_nan=False))
def test_loop_weight_global_phase(theta):
    assert tp.loop_consistency_weight(np.exp(1j * theta) * np.eye(2)) == pytest.approx(1.0, abs=1e-15)


def test_loop_weight_shape():
    with pytest.raises(DimensionError):
        tp.loop_consistency_weight(np.eye(4))
