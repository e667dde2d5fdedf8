"""Teleportation read as a post-selected time machine.

Bob creates a Bell pair at ``t_s`` and sends one arm to Alice. Alice prepares
``mu|0> + nu|1>`` at ``t_p`` and Bell-measures it with that arm at ``t_m``.
When the outcome is the same Bell state Bob created, retrodiction places a
time-retarded copy of Alice's qubit in Bob's hands before she made it.

Qubits are energy eigenstate superpositions: ``|1>`` picks up a phase
``exp(-i omega tau)`` relative to ``|0>`` over an interval ``tau``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError
from .quantum import (
    BELL_MEASUREMENT_ORDER,
    PureState,
    UnitaryGate,
    bell_state,
)

# The Bell state Bob creates and Alice post-selects on.
SOURCE_BELL = "phi_plus"


@dataclass(frozen=True)
class TimedQubit:
    state: PureState
    omega: float
    created_at: float = 0.0

    def __post_init__(self):
        if self.state.dim != 2:
            raise DimensionError("a timed qubit must be a single qubit")

    @property
    def mu(self) -> complex:
        return complex(self.state.amplitudes[0])

    @property
    def nu(self) -> complex:
        return complex(self.state.amplitudes[1])


@dataclass(frozen=True)
class TeleportTimeline:
    t_s: float
    t_p: float
    t_m: float

    def __post_init__(self):
        if not self.t_s < self.t_p < self.t_m:
            raise ValueError(
                f"timeline must satisfy t_s < t_p < t_m, got {self.t_s}, {self.t_p}, {self.t_m}"
            )


def _phase_evolve(amps: np.ndarray, omega: float, tau: float) -> np.ndarray:
    return np.array([amps[0], np.exp(-1j * omega * tau) * amps[1]])


def evolve(q: TimedQubit, tau: float) -> PureState:
    """``mu|0> + exp(-i omega tau) nu|1>``. Negative ``tau`` runs backwards."""
    return PureState(_phase_evolve(q.state.amplitudes, q.omega, tau), (2,))


def bell_probabilities(prepared: PureState, resource: PureState) -> np.ndarray:
    """Born probabilities of Alice's Bell measurement.

    Alice measures her prepared qubit together with the first qubit of the
    two-qubit ``resource``; the second stays with Bob. Outcomes are returned
    in ``BELL_MEASUREMENT_ORDER``: ``(|00>+|11>, |00>-|11>, |01>+|10>,
    |01>-|10>)`` (all over sqrt 2).
    """
    if prepared.dim != 2 or resource.dim != 4:
        raise DimensionError("need a one-qubit prepared state and a two-qubit resource")
    joint = np.kron(prepared.amplitudes, resource.amplitudes).reshape(4, 2)
    probs = []
    for kind in BELL_MEASUREMENT_ORDER:
        bob = np.conj(bell_state(kind).amplitudes) @ joint
        probs.append(float(np.real(np.vdot(bob, bob))))
    return np.array(probs)


def retrodict_source(prepared: TimedQubit, timeline: TeleportTimeline) -> PureState:
    """State Bob holds at ``t_s``, retrodicted from a ``phi_plus`` outcome.

    The chain is: project the measured Bell state onto Alice's preparation,
    run the remaining qubit back from ``t_p`` to ``t_s``, then contract it
    with the Bell state created at the source. The result is
    ``mu exp(i (t_s - t_p) omega)|0> + nu|1>``, where ``mu, nu`` are the
    amplitudes at ``t_p`` (the qubit is first evolved from ``created_at``).
    """
    bell = bell_state(SOURCE_BELL).amplitudes.reshape(2, 2)
    alpha = _phase_evolve(prepared.state.amplitudes, prepared.omega, timeline.t_p - prepared.created_at)
    # <alpha|_1 |phi+>_{12}: the retrodicted state of the arm Alice received.
    arm = np.conj(alpha) @ bell
    arm = _phase_evolve(arm, prepared.omega, timeline.t_s - timeline.t_p)
    # Contract with the source pair (arm, Bob) using the arm's conjugate as a bra.
    bob = np.conj(arm) @ bell
    return PureState.normalized(bob, (2,))


def loop_consistency_weight(f) -> float:
    """Relative weight ``|Tr f / d|^2`` of the self-consistent teleportation loop.

    Bob applies ``f`` to the qubit he received and has Alice teleport it back
    to himself in the past. Zero means the paradoxical history never occurs.
    """
    m = f.matrix if isinstance(f, UnitaryGate) else np.asarray(f, dtype=np.complex128)
    if m.shape != (2, 2):
        raise DimensionError(f"loop operation must be 2x2, got {m.shape}")
    return float(abs(np.trace(m) / 2.0) ** 2)
