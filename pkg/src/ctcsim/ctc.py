"""Closed-timelike-curve interactions on a two-rail wiring.

Wiring: rail 1 carries the chronology-respecting input, rail 2 the system
emerging from the CTC. The rail-1 output enters the CTC (and so becomes the
rail-2 input), and the detector reads the rail-2 output. Under this crossed
convention ``U = SWAP`` means no interaction at all. The uncrossed textbook
convention is recovered by composing ``U`` with SWAP.

Two boundary conditions are provided:

* Deutsch: the CTC-borne density operator ``rho`` must satisfy
  ``rho = Tr_2[U (rho_in ⊗ rho) U^dagger]``; the output is
  ``Tr_1[U (rho_in ⊗ rho) U^dagger]``. Solved either by iterating the
  unrolled circuit from the maximally mixed state, or by a direct
  eigenspace computation that also exposes non-unique solutions.
* Post-selected (path integral): histories are matched component-wise,
  which contracts ``U`` to a (generally non-unitary) operator on the input,
  followed by renormalisation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .exceptions import ConvergenceError, DimensionError, ParadoxError
from .quantum import (
    DensityOperator,
    PureState,
    UnitaryGate,
    density_matrix,
    dims_of,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
PARADOX_EPS = 1e-12
OSCILLATION_WINDOW = 50
NULLSPACE_RANK_TOL = 1e-8
SUPPORT_TOL = 1e-9

METHODS = ("deutsch_iterative", "deutsch_nullspace", "pctc")


@dataclass(frozen=True)
class CtcWiring:
    unitary: UnitaryGate

    def __post_init__(self):
        u = self.unitary
        if not isinstance(u, UnitaryGate):
            d = int(round(np.sqrt(np.asarray(u).shape[0])))
            u = UnitaryGate(np.asarray(u), (d, d))
            object.__setattr__(self, "unitary", u)
        if len(u.dims) != 2 or u.dims[0] != u.dims[1]:
            raise DimensionError(
                f"CTC wiring needs two rails of equal dimension, got dims {u.dims}"
            )

    @property
    def d(self) -> int:
        return self.unitary.dims[0]


@dataclass(frozen=True)
class CtcSolution:
    """Result of a CTC solve.

    ``strategy`` records how the fixed point was reached (``plain``,
    ``damped``, ``cesaro``, ``eigenspace``, ``max_entropy_ascent`` or
    ``iterative_fallback``). ``fixed_point_set_dimension`` is only set by the
    eigenspace solver. For the post-selected method ``fixed_point`` is None
    and ``weight`` holds the consistency weight.
    """

    fixed_point: DensityOperator | None
    output: DensityOperator
    method: str
    iterations: int
    residual: float
    strategy: str = ""
    converged: bool = True
    fixed_point_set_dimension: int | None = None
    weight: float | None = None


class PctcOutcome(NamedTuple):
    state: PureState | DensityOperator
    weight: float


def _wiring(w) -> CtcWiring:
    return w if isinstance(w, CtcWiring) else CtcWiring(w)


def _input_matrix(rho_in, d: int) -> np.ndarray:
    m = density_matrix(rho_in)
    if m.shape != (d, d):
        raise DimensionError(f"input state has shape {m.shape}, wiring expects ({d}, {d})")
    return m


def _joint(rho_in: np.ndarray, rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u @ np.kron(rho_in, rho) @ linalg.dagger(u)


def _rail1_out(rho_in: np.ndarray, rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    d = rho_in.shape[0]
    return linalg.partial_trace(_joint(rho_in, rho, u), (d, d), 1)


def _rail2_out(rho_in: np.ndarray, rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    d = rho_in.shape[0]
    return linalg.partial_trace(_joint(rho_in, rho, u), (d, d), 0)


def _td(a: np.ndarray, b: np.ndarray) -> float:
    diff = a - b
    return 0.5 * linalg.trace_norm(0.5 * (diff + linalg.dagger(diff)))


def consistency_residual(rho_in, rho, w) -> float:
    """Trace distance between ``rho`` and its image under the consistency map."""
    w = _wiring(w)
    r = density_matrix(rho)
    return _td(r, _rail1_out(_input_matrix(rho_in, w.d), r, w.unitary.matrix))


def deutsch_map(rho_in, rho, w) -> DensityOperator:
    """Rail-1 output marginal ``Tr_2[U (rho_in ⊗ rho) U^dagger]``."""
    w = _wiring(w)
    m_in = _input_matrix(rho_in, w.d)
    r = density_matrix(rho)
    if r.shape != (w.d, w.d):
        raise DimensionError(f"CTC state has shape {r.shape}, wiring expects ({w.d}, {w.d})")
    return DensityOperator.from_numerical(_rail1_out(m_in, r, w.unitary.matrix), (w.d,))


def deutsch_output(rho_in, rho, w) -> DensityOperator:
    """Detected state ``Tr_1[U (rho_in ⊗ rho) U^dagger]`` for a given CTC state."""
    w = _wiring(w)
    m_in = _input_matrix(rho_in, w.d)
    return DensityOperator.from_numerical(
        _rail2_out(m_in, density_matrix(rho), w.unitary.matrix), (w.d,)
    )


def _finish(m_in, rho, w: CtcWiring, method, iterations, strategy, **extra) -> CtcSolution:
    u = w.unitary.matrix
    fixed = DensityOperator.from_numerical(rho, (w.d,))
    residual = _td(fixed.matrix, _rail1_out(m_in, fixed.matrix, u))
    out = DensityOperator.from_numerical(_rail2_out(m_in, fixed.matrix, u), (w.d,))
    return CtcSolution(fixed, out, method, iterations, residual, strategy, **extra)


def solve_deutsch_iterative(
    rho_in,
    w,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    damping: float = 1.0,
) -> CtcSolution:
    """Iterate the unrolled circuit from the maximally mixed state.

    ``rho_{n+1} = (1 - damping) rho_n + damping * F(rho_n)`` where ``F`` is
    the consistency map, stopping once successive iterates are within
    ``tol`` in trace distance. If the step size fails to decrease over
    ``OSCILLATION_WINDOW`` iterations the solver switches to damping 0.5,
    and after that to Cesàro averaging of the iterates; ``strategy`` on the
    result says which stage finished.

    Raises:
        ConvergenceError: after ``max_iter`` iterations; ``.solution``
            carries the last iterate and its residual.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0.0 < damping <= 1.0:
        raise ValueError("damping must lie in (0, 1]")
    w = _wiring(w)
    d = w.d
    u = w.unitary.matrix
    m_in = _input_matrix(rho_in, d)

    # The map is linear in rho, so build its Liouville matrix once.
    lmat = linalg.superoperator(lambda r: _rail1_out(m_in, r, u), d)

    def step(r):
        return (lmat @ r.reshape(-1, order="F")).reshape(d, d, order="F")

    stages = [("plain" if damping == 1.0 else "damped", damping)]
    if damping != 0.5:
        stages.append(("damped", 0.5))
    stages.append(("cesaro", 0.5))

    rho = np.eye(d, dtype=np.complex128) / d
    stage_idx = 0
    history: list[float] = []
    avg = None
    n_avg = 0
    residual = float("inf")
    for it in range(1, max_iter + 1):
        name, lam = stages[stage_idx]
        new = (1.0 - lam) * rho + lam * step(rho)
        if name == "cesaro":
            n_avg += 1
            avg = new if avg is None else avg + (new - avg) / n_avg
            residual = _td(avg, step(avg))
            rho = new
            if residual < tol:
                return _finish(m_in, avg, w, "deutsch_iterative", it, name)
            continue
        residual = _td(new, rho)
        rho = new
        if residual < tol:
            return _finish(m_in, rho, w, "deutsch_iterative", it, name)
        history.append(residual)
        if len(history) > OSCILLATION_WINDOW and history[-1] >= history[-1 - OSCILLATION_WINDOW]:
            logger.debug("residual not decreasing under %s iteration; escalating", name)
            stage_idx += 1
            history.clear()

    final = avg if avg is not None else rho
    partial = _finish(m_in, final, w, "deutsch_iterative", max_iter, stages[stage_idx][0])
    partial = CtcSolution(
        partial.fixed_point,
        partial.output,
        partial.method,
        max_iter,
        partial.residual,
        partial.strategy,
        converged=False,
    )
    raise ConvergenceError(
        f"Deutsch iteration did not converge in {max_iter} steps "
        f"(last step {residual:.3e}, consistency residual {partial.residual:.3e}, "
        f"stage {partial.strategy})",
        solution=partial,
    )


def consistency_superoperator(rho_in, w) -> np.ndarray:
    """Liouville matrix of the (linear) consistency map ``rho -> F(rho)``."""
    w = _wiring(w)
    m_in = _input_matrix(rho_in, w.d)
    u = w.unitary.matrix
    return linalg.superoperator(lambda x: _rail1_out(m_in, x, u), w.d)


def _fixed_hermitian_basis(lmat: np.ndarray, d: int, rank_tol: float) -> list[np.ndarray]:
    """Orthonormal Hermitian basis of the eigenvalue-1 eigenspace of ``lmat``."""
    herm = linalg.hermitian_basis(d)
    shifted = lmat - np.eye(d * d)
    cols = np.stack([shifted @ linalg.vec(h) for h in herm], axis=1)
    real_sys = np.vstack([cols.real, cols.imag])
    _, s, vh = np.linalg.svd(real_sys)
    s_full = np.zeros(len(herm))
    s_full[: len(s)] = s
    null = vh[s_full <= rank_tol]
    return [sum(c * h for c, h in zip(row, herm)) for row in null]


def _entropy_nats(m: np.ndarray) -> float:
    w = np.clip(linalg.eigvals_hermitian(m), 0.0, None)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


def _max_entropy_ascent(rho0, directions, start, max_steps=500):
    """Projected gradient ascent of the entropy over ``rho0 + span(directions)``.

    Returns the maximiser, or None when the ascent stalls.
    """
    x = np.array([np.real(np.vdot(b, start - rho0)) for b in directions])

    def point(x):
        return rho0 + sum(c * b for c, b in zip(x, directions))

    cur = point(x)
    if linalg.eigvals_hermitian(cur)[0] < -SUPPORT_TOL:
        return None
    f = _entropy_nats(cur)
    for _ in range(max_steps):
        lw, lv = linalg.eig_hermitian(cur)
        log_rho = (lv * np.log(np.clip(lw, 1e-300, None))) @ linalg.dagger(lv)
        grad = np.array([-np.real(np.trace(b @ log_rho)) for b in directions])
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-12:
            return cur
        t = 1.0
        improved = False
        for _ in range(60):
            cand = point(x + t * grad)
            lam = linalg.eigvals_hermitian(cand)
            if lam[0] >= 0.0:
                fc = _entropy_nats(cand)
                if fc > f:
                    x, cur, f_old, f = x + t * grad, cand, f, fc
                    improved = True
                    break
            t *= 0.5
        if not improved:
            return None
        if f - f_old < 1e-15:
            return cur
    return cur


def _support_face_dimension(rho: np.ndarray, directions) -> int:
    """Dimension of the fixed-point slice directions supported inside range(rho)."""
    if not directions:
        return 0
    w, v = linalg.eig_hermitian(rho)
    kernel = v[:, w <= SUPPORT_TOL]
    if kernel.shape[1] == 0:
        return len(directions)
    cols = np.stack([(linalg.dagger(kernel) @ b).reshape(-1) for b in directions], axis=1)
    real_sys = np.vstack([cols.real, cols.imag])
    s = np.linalg.svd(real_sys, compute_uv=False)
    rank = int(np.sum(s > NULLSPACE_RANK_TOL))
    return len(directions) - rank


def solve_deutsch_nullspace(
    rho_in,
    w,
    tol: float = DEFAULT_TOL,
    rank_tol: float = NULLSPACE_RANK_TOL,
) -> CtcSolution:
    """Solve the consistency equation as a linear eigenproblem.

    The consistency map is vectorised to a ``d^2 x d^2`` Liouville matrix and
    its eigenvalue-1 eigenspace is intersected with the Hermitian, unit-trace
    matrices. The affine dimension of the positive-semidefinite part of that
    slice is reported as ``fixed_point_set_dimension`` (0 means unique). When
    it is positive, the maximum-entropy member is returned; if the ascent
    stalls, the iterative solution is used instead.
    """
    w = _wiring(w)
    d = w.d
    m_in = _input_matrix(rho_in, d)
    lmat = consistency_superoperator(m_in, w)
    basis = _fixed_hermitian_basis(lmat, d, rank_tol)
    traces = np.array([np.real(np.trace(h)) for h in basis])
    norm2 = float(traces @ traces)
    if not basis or norm2 < 1e-20:
        # A unit-trace fixed point always exists; this only triggers on a
        # badly chosen rank_tol.
        sol = solve_deutsch_iterative(m_in, w, tol=tol)
        return CtcSolution(
            sol.fixed_point, sol.output, "deutsch_nullspace", sol.iterations,
            sol.residual, "iterative_fallback", fixed_point_set_dimension=0,
        )
    u_vec = traces / norm2
    rho0 = sum(c * h for c, h in zip(u_vec, basis))
    # Orthonormal traceless directions within the fixed Hermitian span.
    if len(basis) > 1:
        q, _ = np.linalg.qr(np.column_stack([traces, np.eye(len(basis))]))
        coeffs = q[:, 1:].T
        directions = [sum(c * h for c, h in zip(row, basis)) for row in coeffs]
    else:
        directions = []

    if not directions:
        return _finish(m_in, rho0, w, "deutsch_nullspace", 0, "eigenspace", fixed_point_set_dimension=0)

    start = None
    if linalg.eigvals_hermitian(rho0)[0] > SUPPORT_TOL:
        start = rho0
    iterative = None
    if start is None:
        iterative = solve_deutsch_iterative(m_in, w, tol=tol)
        start = iterative.fixed_point.matrix
    best = _max_entropy_ascent(rho0, directions, start)
    strategy = "max_entropy_ascent"
    if best is None:
        if iterative is None:
            iterative = solve_deutsch_iterative(m_in, w, tol=tol)
        best = iterative.fixed_point.matrix
        strategy = "iterative_fallback"
    dim = _support_face_dimension(best, directions)
    return _finish(m_in, best, w, "deutsch_nullspace", 0, strategy, fixed_point_set_dimension=dim)


def pctc_operator(w) -> np.ndarray:
    """Effective operator of the post-selected CTC.

    ``<b|C|a> = (1/d) sum_j <j, b| U |a, j>``: the rail-1 output is matched to
    the rail-2 input for every history. The ``1/d`` normalisation makes
    ``U = SWAP`` give ``C = I``.
    """
    w = _wiring(w)
    d = w.d
    t = w.unitary.matrix.reshape(d, d, d, d)  # [out1, out2, in1, in2]
    return np.einsum("jbaj->ba", t) / d


def apply_pctc(state, w, paradox_eps: float = PARADOX_EPS) -> PctcOutcome:
    """Apply the post-selected CTC to a pure or mixed input and renormalise.

    Returns the normalised state and the pre-normalisation weight
    ``||C psi||^2`` (``Tr C rho C^dagger`` for mixed input).

    Raises:
        ParadoxError: if the weight is below ``paradox_eps``.
    """
    w = _wiring(w)
    c = pctc_operator(w)
    if isinstance(state, PureState) or (
        not isinstance(state, DensityOperator) and np.ndim(state) == 1
    ):
        psi = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=np.complex128)
        if psi.shape != (w.d,):
            raise DimensionError(f"input state has dimension {psi.shape[0]}, wiring expects {w.d}")
        out = c @ psi
        weight = float(np.real(np.vdot(out, out)))
        if weight < paradox_eps:
            raise ParadoxError(weight, paradox_eps, "post-selected CTC")
        return PctcOutcome(PureState(out / np.sqrt(weight), (w.d,)), weight)
    m = _input_matrix(state, w.d)
    out = c @ m @ linalg.dagger(c)
    weight = float(np.real(np.trace(out)))
    if weight < paradox_eps:
        raise ParadoxError(weight, paradox_eps, "post-selected CTC")
    return PctcOutcome(DensityOperator.from_numerical(out / weight, (w.d,)), weight)


def deutsch_kraus(fixed_point, w) -> list[np.ndarray]:
    """Kraus operators of ``sigma -> Tr_1[U (sigma ⊗ rho*) U^dagger]``."""
    w = _wiring(w)
    d = w.d
    lam, vecs = linalg.eig_hermitian(density_matrix(fixed_point))
    u = w.unitary.matrix.reshape(d, d, d, d)  # [out1, out2, in1, in2]
    ops = []
    for p, m_vec in zip(lam, vecs.T):
        if p <= 0.0:
            continue
        # K_{m,j}[out2, in1] = sqrt(p) * sum_in2 U[j, out2, in1, in2] m[in2]
        block = np.einsum("jbai,i->jba", u, m_vec)
        ops.extend(np.sqrt(p) * block[j] for j in range(d))
    return ops


def extend_to_entangled(
    joint,
    w,
    ctc_on: int = 1,
    method: str = "deutsch",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    paradox_eps: float = PARADOX_EPS,
) -> DensityOperator:
    """Send factor ``ctc_on`` of a multipartite state through the CTC.

    ``deutsch``: the consistency equation is solved with that factor's
    reduced state as input, and the resulting channel is applied locally.
    ``pctc``: ``I ⊗ C`` is applied and the joint state renormalised.
    """
    w = _wiring(w)
    m = density_matrix(joint)
    dims = dims_of(joint, m.shape[0])
    if not 0 <= ctc_on < len(dims):
        raise DimensionError(f"ctc_on={ctc_on} out of range for {len(dims)} factors")
    if dims[ctc_on] != w.d:
        raise DimensionError(f"factor {ctc_on} has dimension {dims[ctc_on]}, wiring expects {w.d}")
    if method == "pctc":
        c = linalg.embed(pctc_operator(w), dims, ctc_on)
        out = c @ m @ linalg.dagger(c)
        weight = float(np.real(np.trace(out)))
        if weight < paradox_eps:
            raise ParadoxError(weight, paradox_eps, "post-selected CTC on entangled input")
        return DensityOperator.from_numerical(out / weight, dims)
    if method == "deutsch":
        local = linalg.reduce_to(m, dims, [ctc_on])
        sol = solve_deutsch_iterative(local, w, tol=tol, max_iter=max_iter)
        out = np.zeros_like(m)
        for k in deutsch_kraus(sol.fixed_point, w):
            big = linalg.embed(k, dims, ctc_on)
            out += big @ m @ linalg.dagger(big)
        return DensityOperator.from_numerical(out, dims)
    raise ValueError(f"unknown method {method!r}; expected 'deutsch' or 'pctc'")


def solve(rho_in, w, method: str = "deutsch", **kwargs) -> CtcSolution:
    """Single entry point used by the CLI.

    ``deutsch`` runs the iterative solver; ``deutsch_nullspace`` the
    eigenspace solver; ``pctc`` the post-selected contraction.
    """
    w = _wiring(w)
    if method in ("deutsch", "deutsch_iterative"):
        return solve_deutsch_iterative(rho_in, w, **kwargs)
    if method == "deutsch_nullspace":
        return solve_deutsch_nullspace(rho_in, w, **{k: v for k, v in kwargs.items() if k == "tol"})
    if method == "pctc":
        eps = kwargs.get("paradox_eps", PARADOX_EPS)
        state, weight = apply_pctc(rho_in, w, eps)
        out = DensityOperator.from_numerical(density_matrix(state), (w.d,))
        return CtcSolution(None, out, "pctc", 0, 0.0, "contraction", weight=weight)
    raise ValueError(f"unknown method {method!r}")
