"""Qubit states, standard gates, density operators and information measures.

Basis convention: ``|0>, |1>`` per qubit, and in multi-qubit registers rail 1
is the most significant tensor factor, so ``|a>|b>`` has index ``a*d + b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .exceptions import DimensionError, InvalidStateError

STATE_TOL = 1e-10
SQRT1_2 = 1.0 / math.sqrt(2.0)


def _default_dims(n: int) -> tuple[int, ...]:
    k = int(round(math.log2(n))) if n > 0 else 0
    if n > 1 and 2**k == n:
        return (2,) * k
    return (n,)


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size == 0 or not np.all(np.isfinite(amps)):
            raise InvalidStateError("state amplitudes must be finite and non-empty")
        dims = tuple(self.dims) or _default_dims(amps.size)
        linalg.check_shape(dims, amps.size)
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > STATE_TOL:
            raise InvalidStateError(f"state is not normalised: sum |a|^2 = {norm2:.12g}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims: Sequence[int] = ()) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if norm == 0.0:
            raise InvalidStateError("cannot normalise the zero vector")
        return cls(amps / norm, tuple(dims))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> "DensityOperator":
        return projector(self)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density operator must be square, got {m.shape}")
        dims = tuple(self.dims) or _default_dims(m.shape[0])
        linalg.check_shape(dims, m.shape[0])
        dev = linalg.hermiticity_error(m)
        if dev > STATE_TOL:
            raise InvalidStateError(f"density operator is not Hermitian (deviation {dev:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidStateError(f"density operator trace is {tr:.12g}, expected 1")
        lam_min = linalg.eigvals_hermitian(m)[0]
        if lam_min < -STATE_TOL:
            raise InvalidStateError(f"density operator has negative eigenvalue {lam_min:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_numerical(cls, m, dims: Sequence[int] = ()) -> "DensityOperator":
        """Symmetrise, clip round-off negativity and renormalise before validating.

        Intended for outputs of numerical solvers, not for user input.
        """
        m = linalg.as_matrix(m)
        m = 0.5 * (m + linalg.dagger(m))
        w, v = linalg.eig_hermitian(m)
        if w[0] < 0.0:
            m = (v * np.clip(w, 0.0, None)) @ linalg.dagger(v)
        return cls(m / np.trace(m).real, tuple(dims))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class UnitaryGate:
    matrix: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        u = linalg.as_matrix(self.matrix)
        if u.shape[0] != u.shape[1]:
            raise InvalidStateError(f"gate must be square, got {u.shape}")
        dims = tuple(self.dims) or _default_dims(u.shape[0])
        linalg.check_shape(dims, u.shape[0])
        err = linalg.max_abs(linalg.dagger(u) @ u - np.eye(u.shape[0]))
        if err > STATE_TOL:
            raise InvalidStateError(f"gate is not unitary: max |U^dagger U - I| = {err:.3e}")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "UnitaryGate") -> "UnitaryGate":
        if self.dims != other.dims:
            raise DimensionError(f"cannot compose gates on {self.dims} and {other.dims}")
        return UnitaryGate(self.matrix @ other.matrix, self.dims)


def density_matrix(state) -> np.ndarray:
    """Raw matrix of a PureState, DensityOperator or array-like."""
    if isinstance(state, DensityOperator):
        return state.matrix
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, np.conj(state.amplitudes))
    a = np.asarray(state, dtype=np.complex128)
    if a.ndim == 1:
        return np.outer(a, np.conj(a))
    return linalg.as_matrix(a)


def dims_of(state, fallback: int | None = None) -> tuple[int, ...]:
    if isinstance(state, (PureState, DensityOperator, UnitaryGate)):
        return state.dims
    return _default_dims(fallback if fallback is not None else np.asarray(state).shape[0])


def ket(*bits: int, d: int = 2) -> PureState:
    """Computational basis state ``|b1 b2 ...>``."""
    idx = 0
    for b in bits:
        if not 0 <= b < d:
            raise ValueError(f"basis label {b} out of range for dimension {d}")
        idx = idx * d + b
    amps = np.zeros(d ** len(bits), dtype=np.complex128)
    amps[idx] = 1.0
    return PureState(amps, (d,) * len(bits))


def qubit(alpha: complex, beta: complex) -> PureState:
    """``alpha|0> + beta|1>``; must already be normalised."""
    return PureState(np.array([alpha, beta], dtype=np.complex128), (2,))


def projector(psi: PureState) -> DensityOperator:
    return DensityOperator(np.outer(psi.amplitudes, np.conj(psi.amplitudes)), psi.dims)


def maximally_mixed(d: int = 2) -> DensityOperator:
    return DensityOperator(np.eye(d, dtype=np.complex128) / d, _default_dims(d))


def tensor(*states):
    """Tensor product of PureStates or of DensityOperators."""
    if all(isinstance(s, PureState) for s in states):
        amps = states[0].amplitudes
        dims = states[0].dims
        for s in states[1:]:
            amps = np.kron(amps, s.amplitudes)
            dims = dims + s.dims
        return PureState(amps, dims)
    mats = [density_matrix(s) for s in states]
    dims: tuple[int, ...] = ()
    for s, m in zip(states, mats):
        dims = dims + dims_of(s, m.shape[0])
    return DensityOperator(linalg.kron_all(*mats), dims)


def reduced_state(state, keep: int | Sequence[int]) -> DensityOperator:
    """Marginal on the listed factors (others traced out)."""
    m = density_matrix(state)
    dims = dims_of(state, m.shape[0])
    keep = [keep] if isinstance(keep, int) else list(keep)
    r = linalg.reduce_to(m, dims, keep)
    return DensityOperator.from_numerical(r, tuple(dims[k] for k in sorted(keep)))


# Bell states. Here phi_+- = (|01> +- |10>)/sqrt2, so the singlet is phi_minus
# and the psi labels take the |00> +- |11> pair.
BELL_KINDS = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")
# Order in which the four Bell outcomes are listed for teleportation.
BELL_MEASUREMENT_ORDER = ("psi_plus", "psi_minus", "phi_plus", "phi_minus")

_BELL_AMPS = {
    "phi_plus": (0.0, SQRT1_2, SQRT1_2, 0.0),
    "phi_minus": (0.0, SQRT1_2, -SQRT1_2, 0.0),
    "psi_plus": (SQRT1_2, 0.0, 0.0, SQRT1_2),
    "psi_minus": (SQRT1_2, 0.0, 0.0, -SQRT1_2),
}


def bell_state(kind: str) -> PureState:
    try:
        amps = _BELL_AMPS[kind]
    except KeyError:
        raise ValueError(f"unknown Bell state {kind!r}; expected one of {BELL_KINDS}") from None
    return PureState(np.array(amps, dtype=np.complex128), (2, 2))


_PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) * SQRT1_2,
}
GATE_NAMES = ("I", "X", "Y", "Z", "H", "CNOT", "SWAP")


def standard_gate(name: str, control_rail: int | None = None) -> UnitaryGate:
    """Named gate. CNOT takes ``control_rail`` 1 (upper, the default) or 2."""
    if name != "CNOT" and control_rail is not None:
        raise ValueError(f"control_rail only applies to CNOT, not {name}")
    if name in _PAULI:
        return UnitaryGate(_PAULI[name].copy(), (2,))
    if name == "CNOT":
        rail = 1 if control_rail is None else control_rail
        p0 = np.diag([1.0, 0.0]).astype(np.complex128)
        p1 = np.diag([0.0, 1.0]).astype(np.complex128)
        x = _PAULI["X"]
        if rail == 1:
            u = np.kron(p0, np.eye(2)) + np.kron(p1, x)
        elif rail == 2:
            u = np.kron(np.eye(2), p0) + np.kron(x, p1)
        else:
            raise ValueError(f"control_rail must be 1 or 2, got {control_rail}")
        return UnitaryGate(u, (2, 2))
    if name == "SWAP":
        u = np.zeros((4, 4), dtype=np.complex128)
        for a in range(2):
            for b in range(2):
                u[2 * b + a, 2 * a + b] = 1.0
        return UnitaryGate(u, (2, 2))
    raise ValueError(f"unknown gate {name!r}; expected one of {GATE_NAMES}")


def on_rail(gate: UnitaryGate, rail: int, n_rails: int = 2) -> UnitaryGate:
    """Lift a single-system gate to act on ``rail`` (1-based) of ``n_rails``."""
    d = gate.dim
    return UnitaryGate(linalg.embed(gate.matrix, (d,) * n_rails, rail - 1), (d,) * n_rails)


def apply_gate(gate: UnitaryGate, state):
    """U|psi> for a PureState, U rho U^dagger otherwise."""
    u = gate.matrix
    if isinstance(state, PureState):
        return PureState.normalized(u @ state.amplitudes, gate.dims)
    m = density_matrix(state)
    return DensityOperator.from_numerical(u @ m @ linalg.dagger(u), gate.dims)


def _plogp_bits(w: np.ndarray) -> float:
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    w = linalg.eigvals_hermitian(density_matrix(rho))
    return _plogp_bits(np.clip(w, 0.0, None))


def purity(rho) -> float:
    m = density_matrix(rho)
    return float(np.real(np.trace(m @ m)))


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"states have different shapes {a.shape} and {b.shape}")


def trace_distance(rho, sigma) -> float:
    a, b = density_matrix(rho), density_matrix(sigma)
    _same_shape(a, b)
    return 0.5 * linalg.trace_norm(a - b)


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    a, b = density_matrix(rho), density_matrix(sigma)
    _same_shape(a, b)
    sa = linalg.matrix_function(a, lambda w: np.sqrt(np.clip(w, 0.0, None)))
    inner = sa @ b @ sa
    inner = 0.5 * (inner + linalg.dagger(inner))
    w = np.clip(linalg.eigvals_hermitian(inner), 0.0, None)
    return float(np.sum(np.sqrt(w)) ** 2)


def negativity(rho, dims: Sequence[int] | None = None, index: int = 1) -> float:
    """Sum of |negative eigenvalues| of the partial transpose on factor ``index``."""
    m = density_matrix(rho)
    dims = tuple(dims) if dims is not None else dims_of(rho, m.shape[0])
    if len(dims) < 2:
        raise DimensionError("negativity requires a bipartition")
    w = linalg.eigvals_hermitian(linalg.partial_transpose(m, dims, index))
    return float(-np.sum(w[w < 0.0]))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: complex Ginibre sample, QR, phase-fixed diagonal."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_pure_state(d: int, rng: np.random.Generator, dims: Sequence[int] = ()) -> PureState:
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.normalized(z, tuple(dims))


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random mixed state from a Ginibre ``d x rank`` sample."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ linalg.dagger(g)
    return DensityOperator.from_numerical(m / np.trace(m).real)
